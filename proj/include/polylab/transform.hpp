#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace polylab {

/// In-place character transform over the group F_p^n on a dense complex
/// array of length p^n (little-endian base-p indexing):
///   out[alpha] = sum_x in[x] * omega^(-alpha.x),  omega = e^(2*pi*i/p).
/// Tensor-structured: n passes of p-point DFTs, O(n * p^(n+1)) operations.
/// `inverse` flips the character sign (omega^(+alpha.x)); normalization is
/// left to the caller.
void group_transform(std::vector<std::complex<double>>& a, std::uint8_t p, bool inverse = false);

/// omega^v for v in F_p.
std::complex<double> root_of_unity(std::uint8_t v, std::uint8_t p);

}  // namespace polylab
