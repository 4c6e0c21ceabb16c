// SPDX-License-Identifier: Apache-2.0
#include "squint/combine.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "squint/error.hpp"

namespace squint::combine {

std::string_view to_string(CombinerKind kind) noexcept
{
    switch (kind) {
    case CombinerKind::PhaseShifterSum: return "ps";
    case CombinerKind::FullIdft: return "idft";
    case CombinerKind::ReducedIdft: return "reduced";
    }
    return "?";
}

CombinerKind parse_kind(std::string_view name)
{
    if (name == "ps") return CombinerKind::PhaseShifterSum;
    if (name == "idft") return CombinerKind::FullIdft;
    if (name == "reduced") return CombinerKind::ReducedIdft;
    throw Error(ErrorCode::InvalidArgument,
                "unknown combiner '" + std::string(name) + "' (expected ps, idft or reduced)");
}

std::vector<cplx> IdftWeights::row(std::size_t r) const
{
    std::vector<cplx> out(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        out[c] = at(r, c);
    }
    return out;
}

double idft_phase(const analytic::ArrayConfig& cfg, double bw_sig, int m_carriers, double n,
                  double tone_offset)
{
    return 2.0 * std::numbers::pi * n * cfg.delay_step_cycles() * (bw_sig / m_carriers) * tone_offset;
}

IdftWeights full_idft_weights(const analytic::ArrayConfig& cfg, double bw_sig,
                              const txrx::OfdmSpec& ofdm)
{
    cfg.validate();
    ofdm.validate();
    IdftWeights w{static_cast<std::size_t>(ofdm.m_carriers), static_cast<std::size_t>(cfg.n_elements), {}};
    w.phase.resize(w.rows * w.cols);
    for (std::size_t m = 0; m < w.rows; ++m) {
        for (std::size_t n = 0; n < w.cols; ++n) {
            w.phase[m * w.cols + n] = idft_phase(cfg, bw_sig, ofdm.m_carriers, static_cast<double>(n),
                                                 static_cast<double>(m) - ofdm.m0());
        }
    }
    return w;
}

namespace {

void check_divides(int whole, int part, const char* what)
{
    if (part < 1 || whole % part != 0) {
        throw Error(ErrorCode::IndivisibleSizing,
                    std::string(what) + " " + std::to_string(part) + " does not divide " +
                        std::to_string(whole));
    }
}

} // namespace

IdftWeights reduced_idft_weights(const analytic::ArrayConfig& cfg, double bw_sig,
                                 const txrx::OfdmSpec& ofdm, int n_sub, int m_group)
{
    cfg.validate();
    ofdm.validate();
    check_divides(cfg.n_elements, n_sub, "n_sub");
    check_divides(ofdm.m_carriers, m_group, "m_group");
    IdftWeights w{static_cast<std::size_t>(ofdm.m_carriers / m_group),
                  static_cast<std::size_t>(cfg.n_elements / n_sub), {}};
    w.phase.resize(w.rows * w.cols);
    for (std::size_t g = 0; g < w.rows; ++g) {
        const double centre = static_cast<double>(g) * m_group + (m_group - 1) / 2.0;
        for (std::size_t r = 0; r < w.cols; ++r) {
            w.phase[g * w.cols + r] = idft_phase(cfg, bw_sig, ofdm.m_carriers,
                                                 static_cast<double>(r) * n_sub, centre - ofdm.m0());
        }
    }
    return w;
}

std::pair<int, int> resolve_reduced(const CombinerSpec& spec, const analytic::ArrayConfig& cfg,
                                    double bw_sig, const txrx::OfdmSpec& ofdm)
{
    int n_sub = 0;
    int m_group = 0;
    if (!spec.n_sub || !spec.m_group) {
        const auto auto_size = analytic::reduced_sizing(cfg, ofdm.m_carriers, bw_sig);
        n_sub = auto_size.n_sub;
        m_group = auto_size.m_group;
    }
    if (spec.n_sub) n_sub = *spec.n_sub;
    if (spec.m_group) m_group = *spec.m_group;
    check_divides(cfg.n_elements, n_sub, "n_sub");
    check_divides(ofdm.m_carriers, m_group, "m_group");
    return {n_sub, m_group};
}

dsp::ComplexSignal phase_sum(const wavefront::ElementStreams& aligned, Exec exec)
{
    if (aligned.n_elements() == 0) {
        throw Error(ErrorCode::InvalidArgument, "no element streams");
    }
    dsp::ComplexSignal out;
    out.samples_per_symbol = aligned.samples_per_symbol;
    out.samples.resize(aligned.length());
    kernels::weighted_sum(aligned.streams, {}, 1.0 / static_cast<double>(aligned.n_elements()),
                          out.samples, exec);
    return out;
}

std::vector<dsp::ComplexSignal> full_idft_combine(const wavefront::ElementStreams& aligned,
                                                  double bw_sig, const txrx::OfdmSpec& ofdm,
                                                  Exec exec)
{
    const auto w = full_idft_weights(aligned.array, bw_sig, ofdm);
    if (w.cols != aligned.n_elements()) {
        throw Error(ErrorCode::DimensionMismatch, "element count differs from array config");
    }
    const double scale = 1.0 / static_cast<double>(w.cols);
    std::vector<dsp::ComplexSignal> out(w.rows);
    // Outputs in parallel; each one is a serial weighted sum.
    for_each_index(w.rows, exec, [&](std::size_t m) {
        out[m].samples_per_symbol = aligned.samples_per_symbol;
        out[m].samples.resize(aligned.length());
        const auto row = w.row(m);
        kernels::weighted_sum(aligned.streams, row, scale, out[m].samples, Exec::Serial);
    });
    return out;
}

ReducedOutput reduced_idft_combine(const wavefront::ElementStreams& aligned, double bw_sig,
                                   const txrx::OfdmSpec& ofdm, int n_sub, int m_group, Exec exec)
{
    const auto w = reduced_idft_weights(aligned.array, bw_sig, ofdm, n_sub, m_group);
    if (w.cols * static_cast<std::size_t>(n_sub) != aligned.n_elements()) {
        throw Error(ErrorCode::DimensionMismatch, "element count differs from array config");
    }
    const std::size_t len = aligned.length();
    std::vector<std::vector<cplx>> subs(w.cols, std::vector<cplx>(len));
    for_each_index(w.cols, exec, [&](std::size_t r) {
        std::span<const std::vector<cplx>> group(aligned.streams.data() + r * n_sub,
                                                 static_cast<std::size_t>(n_sub));
        kernels::weighted_sum(group, {}, 1.0, subs[r], Exec::Serial);
    });
    ReducedOutput result;
    result.n_sub = n_sub;
    result.m_group = m_group;
    result.outputs.resize(w.rows);
    const double scale = 1.0 / static_cast<double>(aligned.n_elements());
    for_each_index(w.rows, exec, [&](std::size_t g) {
        auto& o = result.outputs[g];
        o.samples_per_symbol = aligned.samples_per_symbol;
        o.samples.resize(len);
        const auto row = w.row(g);
        kernels::weighted_sum(subs, row, scale, o.samples, Exec::Serial);
    });
    return result;
}

std::vector<cplx> tone_weights(const CombinerSpec& spec, const analytic::ArrayConfig& cfg,
                               double bw_sig, const txrx::OfdmSpec& ofdm)
{
    cfg.validate();
    ofdm.validate();
    const std::size_t m_tones = static_cast<std::size_t>(ofdm.m_carriers);
    const std::size_t n_el = static_cast<std::size_t>(cfg.n_elements);
    std::vector<cplx> out(m_tones * n_el, cplx{1.0, 0.0});
    switch (spec.kind) {
    case CombinerKind::PhaseShifterSum:
        break;
    case CombinerKind::FullIdft: {
        const auto w = full_idft_weights(cfg, bw_sig, ofdm);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = std::polar(1.0, w.phase[i]);
        }
        break;
    }
    case CombinerKind::ReducedIdft: {
        const auto [n_sub, m_group] = resolve_reduced(spec, cfg, bw_sig, ofdm);
        const auto w = reduced_idft_weights(cfg, bw_sig, ofdm, n_sub, m_group);
        for (std::size_t m = 0; m < m_tones; ++m) {
            for (std::size_t n = 0; n < n_el; ++n) {
                out[m * n_el + n] = w.at(m / m_group, n / n_sub);
            }
        }
        break;
    }
    }
    return out;
}

void write_weights_csv(std::ostream& os, const IdftWeights& w)
{
    os << "output";
    for (std::size_t c = 0; c < w.cols; ++c) {
        os << ",e" << c;
    }
    os << '\n';
    const auto old_prec = os.precision(17);
    for (std::size_t r = 0; r < w.rows; ++r) {
        os << r;
        for (std::size_t c = 0; c < w.cols; ++c) {
            os << ',' << w.phase[r * w.cols + c];
        }
        os << '\n';
    }
    os.precision(old_prec);
}

} // namespace squint::combine
