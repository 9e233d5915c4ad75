#include "polylab/transform.hpp"

#include <numbers>

#include "polylab/exec.hpp"

namespace polylab {

std::complex<double> root_of_unity(std::uint8_t v, std::uint8_t p) {
    if (p == 2) return v ? -1.0 : 1.0;
    const double ang = 2.0 * std::numbers::pi * v / p;
    return {std::cos(ang), std::sin(ang)};
}

void group_transform(std::vector<std::complex<double>>& a, std::uint8_t p, bool inverse) {
    const std::size_t size = a.size();
    if (p == 2) {
        // Walsh-Hadamard; sign of the character is irrelevant at p = 2.
        for (std::size_t h = 1; h < size; h <<= 1) {
            parallel_for_chunked(size / (2 * h), [&](std::size_t, std::size_t cb, std::size_t ce) {
                for (std::size_t blk = cb; blk < ce; ++blk) {
                    const std::size_t base = blk * 2 * h;
                    for (std::size_t j = base; j < base + h; ++j) {
                        const auto u = a[j], v = a[j + h];
                        a[j] = u + v;
                        a[j + h] = u - v;
                    }
                }
            });
        }
        return;
    }

    std::vector<std::complex<double>> w(p * p);
    for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k) {
            auto r = root_of_unity(static_cast<std::uint8_t>((j * k) % p), p);
            w[static_cast<std::size_t>(j * p + k)] = inverse ? r : std::conj(r);
        }

    std::vector<std::complex<double>> tmp(p);
    for (std::size_t stride = 1; stride < size; stride *= p) {
        const std::size_t block = stride * p;
        for (std::size_t base = 0; base < size; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int j = 0; j < p; ++j) {
                    std::complex<double> s = 0;
                    for (int k = 0; k < p; ++k)
                        s += w[static_cast<std::size_t>(j * p + k)] *
                             a[base + off + static_cast<std::size_t>(k) * stride];
                    tmp[static_cast<std::size_t>(j)] = s;
                }
                for (int j = 0; j < p; ++j)
                    a[base + off + static_cast<std::size_t>(j) * stride] =
                        tmp[static_cast<std::size_t>(j)];
            }
        }
    }
}

}  // namespace polylab
