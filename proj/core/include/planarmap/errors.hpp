#pragma once

#include <stdexcept>
#include <string>

namespace planarmap {

// Total degree of a product would exceed the configured cap.
struct DegreeOverflowError : std::length_error {
    explicit DegreeOverflowError(const std::string& what) : std::length_error(what) {}
};

// Operation needs a nonzero polynomial (leading form, root isolation, ...).
struct ZeroPolynomialError : std::domain_error {
    explicit ZeroPolynomialError(const std::string& what) : std::domain_error(what) {}
};

// Operation needs a nonconstant polynomial (charts, directions at infinity).
struct ConstantInputError : std::domain_error {
    explicit ConstantInputError(const std::string& what) : std::domain_error(what) {}
};

// Transport laws only make sense when the jacobian determinant is a constant.
struct NonconstantJacobianError : std::domain_error {
    explicit NonconstantJacobianError(const std::string& what) : std::domain_error(what) {}
};

} // namespace planarmap
