#pragma once

#include <stdexcept>
#include <string>

namespace renewal {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// mgf evaluated at (or within tolerance of) a pole of the meromorphic extension.
class PoleEvaluation : public Error {
public:
    using Error::Error;
};

// The family has no extension at the requested point.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

// Safety loading c - alpha*m <= 0 (continuous) or E[Z] >= 1 (discrete).
class NegativeLoading : public Error {
public:
    using Error::Error;
};

// Lundberg equation has no root below the overflow guard.
class NoFiniteRoot : public Error {
public:
    using Error::Error;
};

// A zero of g-1 sits on a counting contour and nudging did not clear it.
class BoundaryZero : public Error {
public:
    using Error::Error;
};

// Winding-integral refinement exceeded the node budget without settling.
class QuadratureDivergence : public Error {
public:
    using Error::Error;
};

// A root cluster could not be separated nor identified as one multiple root.
class MultiplicityUnresolved : public Error {
public:
    using Error::Error;
};

// residue_simple called on a root with multiplicity > 1.
class NotSimple : public Error {
public:
    using Error::Error;
};

// An extra factor of the integrand vanishes at the pole (e.g. z_j + kappa = 0).
class DegenerateFactor : public Error {
public:
    using Error::Error;
};

// Contour quadrature for a residue failed to stabilise.
class NoConvergence : public Error {
public:
    using Error::Error;
};

// Another pole intrudes into the isolation disk of a residue contour.
class PoleTooClose : public Error {
public:
    using Error::Error;
};

// Lattice renewal recursion requires pmf(0) < 1.
class MassAtZeroOne : public Error {
public:
    using Error::Error;
};

// Model file malformed or parameters violate a family invariant.
class ModelError : public Error {
public:
    using Error::Error;
};

} // namespace renewal
