// SPDX-License-Identifier: Apache-2.0
#include "squint/analytic.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace squint::analytic {

namespace {

constexpr double pi = std::numbers::pi;

// Bandwidth constant from the sinc half-power point, stated for d = lambda_0/2.
constexpr double kCoherentConstant = 1.77;

// sin(N psi) / (N sin psi) in magnitude. psi is first folded into [-pi/2, pi/2]
// (both sines only change sign under psi -> psi + pi), then the removable
// singularity at psi = k*pi is replaced by its limit.
double dirichlet(int n, double psi)
{
    const double folded = psi - pi * std::round(psi / pi);
    if (std::abs(folded) < 1e-12) {
        return 1.0;
    }
    return std::abs(std::sin(n * folded) / (n * std::sin(folded)));
}

// (d/lambda_0) |sin theta_0|, the per-element delay in carrier cycles.
double squint_slope(const ArrayConfig& cfg)
{
    return cfg.spacing_ratio * std::abs(std::sin(cfg.steer_angle));
}

double require_steer(const ArrayConfig& cfg, const char* what)
{
    cfg.validate();
    const double s = squint_slope(cfg);
    if (s < 1e-15) {
        throw Error(ErrorCode::DegenerateSteer,
                    std::string(what) + " is unbounded at broadside (theta_0 = 0)");
    }
    return s;
}

} // namespace

void ArrayConfig::validate() const
{
    if (n_elements < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_elements must be >= 1");
    }
    if (!(spacing_ratio > 0.0 && spacing_ratio <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "spacing_ratio must be in (0, 1]");
    }
    // Endfire (|theta_0| = pi/2) is allowed; the slack absorbs degree conversion.
    if (!(std::abs(steer_angle) <= pi / 2 + 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "steer_angle must be inside [-pi/2, pi/2]");
    }
}

double ArrayConfig::phase_step() const noexcept
{
    return 2.0 * pi * spacing_ratio * std::sin(steer_angle);
}

double ArrayConfig::delay_step_cycles() const noexcept
{
    return spacing_ratio * std::sin(steer_angle);
}

double deg_to_rad(double deg) noexcept { return deg * pi / 180.0; }
double rad_to_deg(double rad) noexcept { return rad * 180.0 / pi; }

double space_factor(const ArrayConfig& cfg, double theta, double f_ratio)
{
    cfg.validate();
    if (!(f_ratio > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "f_ratio must be positive");
    }
    const double psi =
        pi * cfg.spacing_ratio * (f_ratio * std::sin(theta) - std::sin(cfg.steer_angle));
    return dirichlet(cfg.n_elements, psi);
}

double space_factor_direct(const ArrayConfig& cfg, double theta, double f_ratio)
{
    cfg.validate();
    const double u = cfg.spacing_ratio * (f_ratio * std::sin(theta) - std::sin(cfg.steer_angle));
    std::complex<double> acc{0.0, 0.0};
    for (int n = 0; n < cfg.n_elements; ++n) {
        acc += std::polar(1.0, 2.0 * pi * n * u);
    }
    return std::abs(acc) / cfg.n_elements;
}

double space_factor_at_steer(const ArrayConfig& cfg, double f_ratio)
{
    cfg.validate();
    if (cfg.spacing_ratio != 0.5) {
        throw Error(ErrorCode::SpacingAssumption,
                    "reduced form assumes d = lambda_0/2, got d/lambda_0 = " +
                        std::to_string(cfg.spacing_ratio));
    }
    if (!(f_ratio > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "f_ratio must be positive");
    }
    const double psi = (pi / 2) * std::sin(cfg.steer_angle) * (f_ratio - 1.0);
    return dirichlet(cfg.n_elements, psi);
}

double coherent_bandwidth(const ArrayConfig& cfg, BandwidthMode mode)
{
    const double s = require_steer(cfg, "coherent bandwidth");
    if (mode == BandwidthMode::Approx) {
        // 1.77/(N sin theta_0) at half-wavelength spacing.
        return kCoherentConstant * 0.5 / (cfg.n_elements * s);
    }
    if (cfg.n_elements < 2) {
        throw Error(ErrorCode::InvalidArgument, "numeric coherent bandwidth needs N >= 2");
    }
    // Main lobe edge: |SF| falls monotonically from 1 at f_o to 0 at the first null.
    const int n = cfg.n_elements;
    const auto response = [&](double f_ratio) {
        return dirichlet(n, pi * s * (f_ratio - 1.0));
    };
    const double target = 1.0 / std::sqrt(2.0);
    double lo = 1.0;
    double hi = 1.0 + 1.0 / (n * s);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (response(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 2.0 * (0.5 * (lo + hi) - 1.0);
}

std::pair<double, double> null_fractions(const ArrayConfig& cfg)
{
    const double s = require_steer(cfg, "null frequency");
    if (cfg.n_elements < 2) {
        throw Error(ErrorCode::InvalidArgument, "a single element has no nulls");
    }
    // 2/(N sin theta_0) at half-wavelength spacing.
    const double offset = 1.0 / (cfg.n_elements * s);
    return {1.0 - offset, 1.0 + offset};
}

double isi_bandwidth_limit(const ArrayConfig& cfg)
{
    const double s = require_steer(cfg, "ISI bandwidth limit");
    return 1.0 / (cfg.n_elements * s);
}

double max_delay_spread(const ArrayConfig& cfg)
{
    cfg.validate();
    return cfg.n_elements * squint_slope(cfg);
}

ToneBounds ofdm_tone_bounds(const ArrayConfig& cfg, int m_carriers, double bw_sig)
{
    const double s = require_steer(cfg, "OFDM tone bound");
    if (m_carriers < 1 || !(bw_sig > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "m_carriers and bw_sig must be positive");
    }
    const double m = m_carriers;
    const double offset = 1.0 / (cfg.n_elements * s * bw_sig);

    ToneBounds out;
    out.null_low = m * (0.5 - offset);
    out.null_high = m * (0.5 + offset);
    const auto inside = [m_carriers](double pos) -> std::optional<int> {
        const long idx = std::lround(pos);
        if (idx < 0 || idx >= m_carriers) {
            return std::nullopt;
        }
        return static_cast<int>(idx);
    };
    out.null_low_tone = inside(out.null_low);
    out.null_high_tone = inside(out.null_high);
    out.m_3db = m * kCoherentConstant * 0.5 / (cfg.n_elements * s * bw_sig);
    return out;
}

ReducedSizing reduced_sizing(const ArrayConfig& cfg, int m_carriers, double bw_sig)
{
    cfg.validate();
    if (m_carriers < 1 || !(bw_sig > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "m_carriers and bw_sig must be positive");
    }
    // (N_r, M_r) > N BW_sig sin(theta_0) / 1.77 at half-wavelength spacing.
    const double bound = cfg.n_elements * bw_sig * squint_slope(cfg) / (kCoherentConstant * 0.5);

    const auto smallest_divisor_above = [bound](int total, const char* what) {
        for (int d = 1; d <= total; ++d) {
            if (total % d == 0 && d > bound) {
                return d;
            }
        }
        throw Error(ErrorCode::Infeasible, std::string("no divisor of ") + what + " = " +
                                               std::to_string(total) + " exceeds " +
                                               std::to_string(bound));
    };

    ReducedSizing out;
    out.n_rows = smallest_divisor_above(cfg.n_elements, "N");
    out.m_rows = smallest_divisor_above(m_carriers, "M");
    out.n_sub = cfg.n_elements / out.n_rows;
    out.m_group = m_carriers / out.m_rows;
    return out;
}

double combine_evm(double snr_db, double ssir_db)
{
    const double lin = std::pow(10.0, -snr_db / 10.0) + std::pow(10.0, -ssir_db / 10.0);
    if (lin <= 0.0) {
        return -120.0;
    }
    return 10.0 * std::log10(lin);
}

double input_referred_ssir(double ssir_db, const ArrayConfig& cfg)
{
    cfg.validate();
    return ssir_db - 10.0 * std::log10(static_cast<double>(cfg.n_elements));
}

AnalyticReport analyze(const ArrayConfig& cfg, double bw_sig, std::optional<int> m_carriers)
{
    AnalyticReport r;
    r.coherent_bw = coherent_bandwidth(cfg, BandwidthMode::Approx);
    if (cfg.n_elements >= 2) {
        r.coherent_bw_numeric = coherent_bandwidth(cfg, BandwidthMode::Numeric);
        r.null_fractions = null_fractions(cfg);
    }
    r.isi_bw_limit = isi_bandwidth_limit(cfg);
    r.max_delay_spread = max_delay_spread(cfg);
    r.eirp_gain_db = 20.0 * std::log10(static_cast<double>(cfg.n_elements));
    r.rx_snr_gain_db = 10.0 * std::log10(static_cast<double>(cfg.n_elements));
    if (m_carriers) {
        r.tone_bounds = ofdm_tone_bounds(cfg, *m_carriers, bw_sig);
        r.reduced_sizing = reduced_sizing(cfg, *m_carriers, bw_sig);
    }
    return r;
}

} // namespace squint::analytic
