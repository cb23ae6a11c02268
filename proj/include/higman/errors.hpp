#pragma once

#include <stdexcept>
#include <string>

namespace higman {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two residues (or polynomials) with different moduli were combined.
struct ModulusMismatch : Error {
    ModulusMismatch() : Error("modulus mismatch") {}
    using Error::Error;
};

// Operands live in different contexts (variable set, k, direction, ...).
struct ContextMismatch : Error {
    ContextMismatch() : Error("context mismatch") {}
    using Error::Error;
};

// Inversion of a residue divisible by p.
struct NotAUnit : Error {
    NotAUnit() : Error("element is not a unit") {}
    using Error::Error;
};

// Series inversion / unit power applied to a polynomial not of the
// form 1 + p*q.
struct NotInvertibleForm : Error {
    NotInvertibleForm() : Error("polynomial is not of the form 1 + p*q") {}
    using Error::Error;
};

// A construction-time identity failed; indicates a programming error,
// not bad input.
struct ShapeMismatch : Error {
    using Error::Error;
};

// one_step was pointed at a position that does not hold a rule lhs.
struct SiteInvalid : Error {
    SiteInvalid() : Error("no rewrite rule applies at the given site") {}
    using Error::Error;
};

// An enumeration grew past its element cap.
struct CapExceeded : Error {
    using Error::Error;
};

// normal_form ran past its step cap (reachable only in the
// experimental p = 2 mode).
struct IterationCapExceeded : Error {
    using Error::Error;
};

// Checked 64-bit integer arithmetic overflowed.
struct OverflowError : Error {
    OverflowError() : Error("exact integer arithmetic overflowed 64 bits") {}
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

}  // namespace higman
