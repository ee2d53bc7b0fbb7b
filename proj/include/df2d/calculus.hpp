#pragma once

#include "df2d/field.hpp"

namespace df2d {

// Result of differentiating one scalar channel: classical term-wise derivative
// plus closed-form delta corrections (coefficients on d^beta delta_O).
struct ChannelDerivative {
    std::vector<SmoothTerm> terms;
    std::map<MultiIndex, double> corrections;
};

// Exact distributional derivative of a scalar channel in direction i (1 or 2).
// rho is the finite-part reference radius used both to classify the original
// term and to anchor the canonical policies of the derivative terms.
ChannelDerivative derive_channel(const std::vector<SmoothTerm>& terms, int i, double rho);

// d/dx_i of a full field, channel-wise (same codomain).
SingularField partial_derivative(const SingularField& F, int i);

SingularField grad(const SingularField& scalar_field);             // scalar -> vector
SingularField div(const SingularField& F);                         // vector -> scalar, tensor -> vector
SingularField curl(const SingularField& F);                        // vector -> scalar, tensor -> vector (row-wise)
SingularField curl_curl(const SingularField& sym_tensor_field);    // sym-tensor -> scalar
SingularField laplacian(const SingularField& scalar_field);        // scalar -> scalar

// Rotation-conjugation map: A(u ⊗ v) = (e3 x u) ⊗ (e3 x v); on components
// A(T) = [[T22, -T21], [-T12, T11]].
SingularField amap(const SingularField& tensor_field);

// Derivative d^alpha with all partials taken distributionally.
SingularField derivative_multi(const SingularField& F, const MultiIndex& a);

// Scalar potential a with grad(a) = v (v curl-free in the algebra, no
// circulation); raises FieldError when v is not an algebra gradient.
SingularField antigradient(const SingularField& vector_field);

} // namespace df2d
