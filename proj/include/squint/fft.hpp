// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace squint::dsp {

using cplx = std::complex<double>;

// Reusable transform plan for one length. Powers of two use an iterative
// radix-2 kernel; every other length goes through Bluestein's chirp-z
// algorithm on a padded power-of-two plan.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(Fft&&) noexcept;
    Fft& operator=(Fft&&) noexcept;

    std::size_t size() const noexcept { return n_; }

    // X[k] = sum_n x[n] exp(-j 2 pi k n / N), in place, unnormalized.
    void forward(std::span<cplx> data) const;
    // Inverse with the 1/N factor, in place.
    void inverse(std::span<cplx> data) const;

private:
    void radix2(std::span<cplx> data) const;
    void bluestein(std::span<cplx> data) const;

    std::size_t n_ = 0;
    bool pow2_ = true;
    std::vector<cplx> twiddle_;
    std::vector<std::size_t> bitrev_;

    std::vector<cplx> chirp_;
    std::vector<cplx> chirp_spectrum_;
    std::unique_ptr<Fft> padded_;
};

std::vector<cplx> dft(std::span<const cplx> signal);
std::vector<cplx> idft(std::span<const cplx> spectrum);

bool is_pow2(std::size_t n) noexcept;
std::size_t next_pow2(std::size_t n) noexcept;

} // namespace squint::dsp
