// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel loops used by the simulation chains. Every kernel has a serial
// reference path; the OpenMP path partitions the *output* index space and keeps
// each output's accumulation order fixed, so both paths give identical bits.
#pragma once

#include <complex>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace squint {

enum class Exec { Serial, Parallel };

/// Worker count for Exec::Parallel regions (OpenMP max threads).
int worker_count();
/// Sets the worker count; values < 1 are ignored.
void set_worker_count(int n);

/// Calls fn(i) for i in [0, n). Exceptions thrown by fn are rethrown (first one wins).
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn)
{
    if (exec == Exec::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::exception_ptr failure;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(squint_for_each_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

namespace kernels {

using cplx = std::complex<double>;

/// out[i] = scale * sum_k weights[k] * streams[k][i], summed in k order.
/// An empty `weights` means all ones.
void weighted_sum(std::span<const std::vector<cplx>> streams, std::span<const cplx> weights,
                  double scale, std::span<cplx> out, Exec exec);

/// x[i] *= phasor for every stream k: streams[k][i] *= phasors[k].
void rotate_streams(std::span<std::vector<cplx>> streams, std::span<const cplx> phasors, Exec exec);

/// Per-tone spatial combining of demodulated grids.
/// grids[n] holds element n as n_symbols x m_tones row-major; weights is
/// m_tones x n_elements row-major. Returns n_symbols x m_tones with
/// out[s][m] = scale * sum_n weights[m][n] * grids[n][s][m], summed in n order.
std::vector<cplx> combine_tones(std::span<const std::vector<cplx>> grids,
                                std::span<const cplx> weights, std::size_t n_symbols,
                                std::size_t m_tones, double scale, Exec exec);

} // namespace kernels
} // namespace squint
