// SPDX-License-Identifier: Apache-2.0
#include "squint/kernels.hpp"

#include <omp.h>
#include <stdexcept>

namespace squint {

int worker_count() { return omp_get_max_threads(); }

void set_worker_count(int n)
{
    if (n >= 1) {
        omp_set_num_threads(n);
    }
}

namespace kernels {

namespace {

// Output blocks are large enough to amortize scheduling and small enough to balance.
constexpr std::size_t kBlock = 1 << 14;

} // namespace

void weighted_sum(std::span<const std::vector<cplx>> streams, std::span<const cplx> weights,
                  double scale, std::span<cplx> out, Exec exec)
{
    if (!weights.empty() && weights.size() != streams.size()) {
        throw std::invalid_argument("weighted_sum: one weight per stream required");
    }
    for (const auto& s : streams) {
        if (s.size() != out.size()) {
            throw std::invalid_argument("weighted_sum: stream length mismatch");
        }
    }
    const std::size_t n = out.size();
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    for_each_index(blocks, exec, [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            out[i] = cplx{};
        }
        for (std::size_t k = 0; k < streams.size(); ++k) {
            const cplx* src = streams[k].data();
            if (weights.empty()) {
                for (std::size_t i = lo; i < hi; ++i) {
                    out[i] += src[i];
                }
            } else {
                const cplx w = weights[k];
                for (std::size_t i = lo; i < hi; ++i) {
                    out[i] += w * src[i];
                }
            }
        }
        if (scale != 1.0) {
            for (std::size_t i = lo; i < hi; ++i) {
                out[i] *= scale;
            }
        }
    });
}

void rotate_streams(std::span<std::vector<cplx>> streams, std::span<const cplx> phasors, Exec exec)
{
    if (phasors.size() != streams.size()) {
        throw std::invalid_argument("rotate_streams: one phasor per stream required");
    }
    for_each_index(streams.size(), exec, [&](std::size_t k) {
        const cplx p = phasors[k];
        for (cplx& v : streams[k]) {
            v *= p;
        }
    });
}

std::vector<cplx> combine_tones(std::span<const std::vector<cplx>> grids,
                                std::span<const cplx> weights, std::size_t n_symbols,
                                std::size_t m_tones, double scale, Exec exec)
{
    const std::size_t n_elements = grids.size();
    if (weights.size() != m_tones * n_elements) {
        throw std::invalid_argument("combine_tones: weights must be m_tones x n_elements");
    }
    for (const auto& g : grids) {
        if (g.size() != n_symbols * m_tones) {
            throw std::invalid_argument("combine_tones: grid size mismatch");
        }
    }
    std::vector<cplx> out(n_symbols * m_tones, cplx{});
    for_each_index(n_symbols, exec, [&](std::size_t s) {
        cplx* row = out.data() + s * m_tones;
        for (std::size_t n = 0; n < n_elements; ++n) {
            const cplx* src = grids[n].data() + s * m_tones;
            for (std::size_t m = 0; m < m_tones; ++m) {
                row[m] += weights[m * n_elements + n] * src[m];
            }
        }
        for (std::size_t m = 0; m < m_tones; ++m) {
            row[m] *= scale;
        }
    });
    return out;
}

} // namespace kernels
} // namespace squint
