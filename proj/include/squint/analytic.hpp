// SPDX-License-Identifier: Apache-2.0
//
// Closed-form analysis of beam squint in a uniform linear array steered with
// phase shifters. Frequencies are fractions of the carrier f_o and times are
// carrier cycles, so nothing here depends on an absolute frequency.
#pragma once

#include <optional>
#include <utility>

#include "squint/error.hpp"

namespace squint::analytic {

/// Uniform linear array geometry and steering.
struct ArrayConfig {
    int n_elements = 8;
    double spacing_ratio = 0.5; ///< d / lambda_0
    double steer_angle = 0.0;   ///< theta_0 in radians, measured from broadside

    /// Throws Error(InvalidArgument) when an invariant is violated.
    void validate() const;
    /// Spacing above half a wavelength admits grating lobes.
    bool grating_lobe_risk() const noexcept { return spacing_ratio > 0.5; }
    /// Progressive per-element carrier phase, 2*pi*(d/lambda_0)*sin(theta_0).
    double phase_step() const noexcept;
    /// Per-element delay in carrier cycles, (d/lambda_0)*sin(theta_0).
    double delay_step_cycles() const noexcept;
};

double deg_to_rad(double deg) noexcept;
double rad_to_deg(double rad) noexcept;

/// |SF_n(theta, f)| from the sin/sin closed form, with the 0/0 limit handled.
double space_factor(const ArrayConfig& cfg, double theta, double f_ratio);

/// The same quantity summed term by term over the N element phasors.
double space_factor_direct(const ArrayConfig& cfg, double theta, double f_ratio);

/// |SF_n| at the steering direction, using d/lambda = f/(2 f_o).
/// Requires d/lambda_0 = 0.5; throws SpacingAssumption otherwise.
double space_factor_at_steer(const ArrayConfig& cfg, double f_ratio);

enum class BandwidthMode { Approx, Numeric };

/// Fractional 3 dB coherent bandwidth. Approx is 1.77/(N sin theta_0) at half-wavelength
/// spacing; Numeric bisects |SF_n(theta_0, f)| = 1/sqrt(2) on the closed form.
double coherent_bandwidth(const ArrayConfig& cfg, BandwidthMode mode);

/// The two nulls of |SF_n(theta_0, f)| closest to f_o, as f/f_o.
std::pair<double, double> null_fractions(const ArrayConfig& cfg);

/// Upper bound on the signal fractional bandwidth for ISI-free single-carrier reception.
double isi_bandwidth_limit(const ArrayConfig& cfg);

/// Delay between first and last element in carrier cycles, N (d/lambda_0) sin theta_0.
double max_delay_spread(const ArrayConfig& cfg);

struct ToneBounds {
    double null_low = 0;   ///< M_null- as a real tone position
    double null_high = 0;  ///< M_null+
    std::optional<int> null_low_tone;  ///< nearest tone when inside [0, M)
    std::optional<int> null_high_tone;
    double m_3db = 0;
};

ToneBounds ofdm_tone_bounds(const ArrayConfig& cfg, int m_carriers, double bw_sig);

struct ReducedSizing {
    int n_sub = 1;   ///< N_o, elements per pre-combined sub-array
    int m_group = 1; ///< M_o, tones served by one IDFT output
    int n_rows = 1;  ///< N_r = N / N_o
    int m_rows = 1;  ///< M_r = M / M_o
};

/// Smallest divisor-aligned reduced IDFT that keeps every tone within 3 dB.
/// Throws Infeasible when no divisor of N (or M) exceeds the bound.
ReducedSizing reduced_sizing(const ArrayConfig& cfg, int m_carriers, double bw_sig);

/// Overall EVM in dB from SNR and SSIR in dB; either may be +infinity.
double combine_evm(double snr_db, double ssir_db);

/// SSIR_in = SSIR - 10 log10 N.
double input_referred_ssir(double ssir_db, const ArrayConfig& cfg);

struct AnalyticReport {
    double coherent_bw = 0;
    std::optional<double> coherent_bw_numeric;                ///< needs N >= 2
    std::optional<std::pair<double, double>> null_fractions; ///< needs N >= 2
    double isi_bw_limit = 0;
    double max_delay_spread = 0;
    double eirp_gain_db = 0;
    double rx_snr_gain_db = 0;
    std::optional<ToneBounds> tone_bounds;
    std::optional<ReducedSizing> reduced_sizing;
};

/// Everything above for one array; tone bounds and sizing when m_carriers is given.
AnalyticReport analyze(const ArrayConfig& cfg, double bw_sig, std::optional<int> m_carriers = {});

} // namespace squint::analytic
