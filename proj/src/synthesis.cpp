#include "qcrb/synthesis.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>

#include "qcrb/errors.hpp"
#include "qcrb/parallel.hpp"

namespace qcrb::modal {

using physics::kPi;

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
    static std::mutex mutex;
    return mutex;
}

bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) <= tol * std::max(1.0, std::abs(x));
}

}  // namespace

struct FieldSynthesizer::Plan {
    fftw_complex* buffer = nullptr;
    fftw_plan plan = nullptr;

    explicit Plan(std::size_t n) {
        std::lock_guard lock(fftw_planner_mutex());
        buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        plan = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buffer);
    }
};

void SynthesisConfig::validate(const SourceSpec& spec) const {
    if (samples_per_coherence < 4) {
        throw ConfigError("synthesis needs at least 4 samples per coherence time");
    }
    if (record_factor < 1 ||
        static_cast<double>(record_factor) * spec.observation_time < spec.observation_time + 10.0 * spec.tau_c) {
        throw ConfigError("synthesis record must cover T_obs plus a 10 tau_c guard band");
    }
}

namespace {

double validated_step(const SourceSpec& spec, const SynthesisConfig& cfg) {
    cfg.validate(spec);
    return spec.tau_c / cfg.samples_per_coherence;
}

}  // namespace

FieldSynthesizer::FieldSynthesizer(const SourceSpec& spec, const SynthesisConfig& cfg)
    : FieldSynthesizer(spec, validated_step(spec, cfg), cfg.record_factor * spec.observation_time) {}

FieldSynthesizer::FieldSynthesizer(const SourceSpec& spec, double dt, double record_length)
    : n0_(spec.n0), dt_(dt) {
    if (!(dt > 0.0) || dt > 0.25 * spec.tau_c * (1.0 + 1e-12)) {
        throw ConfigError("synthesis step dt must be positive and at most 1/(4 delta_nu)");
    }
    if (!(record_length >= spec.observation_time + 10.0 * spec.tau_c)) {
        throw ConfigError("synthesis record must cover T_obs plus a 10 tau_c guard band");
    }
    const double steps = record_length / dt;
    if (!near_integer(steps)) {
        throw ConfigError("synthesis record length must be a whole number of steps");
    }
    samples_ = static_cast<std::size_t>(std::llround(steps));
    period_ = dt_ * static_cast<double>(samples_);
    t0_ = -0.5 * period_;

    // Lines k/Tr with |k| <= delta_nu Tr / 2; lines exactly on an edge carry half power.
    const double half_lines = 0.5 * spec.delta_nu * period_;
    const auto kmax = static_cast<std::int64_t>(std::floor(half_lines + 1e-9));
    first_line_ = -kmax;
    line_weights_.assign(static_cast<std::size_t>(2 * kmax + 1), 1.0);
    if (near_integer(half_lines)) {
        line_weights_.front() = 0.5;
        line_weights_.back() = 0.5;
    }
    if (line_weights_.size() >= samples_) {
        throw ConfigError("synthesis grid too coarse for the band");
    }
    plan_ = std::make_unique<Plan>(samples_);
}

FieldSynthesizer::~FieldSynthesizer() = default;

FieldRealization FieldSynthesizer::operator()(rng::Stream& stream) {
    auto* buffer = plan_->buffer;
    for (std::size_t i = 0; i < samples_; ++i) {
        buffer[i][0] = 0.0;
        buffer[i][1] = 0.0;
    }
    // x(t_i) = sum_k c_k exp(-i 2 pi k t_i / Tr), t_i = t0 + (i + 1/2) dt.
    const double shift = t0_ + 0.5 * dt_;
    double power = 0.0;
    const auto n = static_cast<std::int64_t>(samples_);
    for (std::size_t l = 0; l < line_weights_.size(); ++l) {
        const std::int64_t k = first_line_ + static_cast<std::int64_t>(l);
        const std::complex<double> c = stream.complex_normal(n0_ * line_weights_[l] / period_);
        power += std::norm(c);
        const double arg = -2.0 * kPi * static_cast<double>(k) * shift / period_;
        const std::complex<double> placed = c * std::complex<double>(std::cos(arg), std::sin(arg));
        const auto bin = static_cast<std::size_t>(((k % n) + n) % n);
        buffer[bin][0] += placed.real();
        buffer[bin][1] += placed.imag();
    }
    fftw_execute(plan_->plan);
    last_spectral_power_ = power;

    FieldRealization field;
    field.dt = dt_;
    field.t0 = t0_;
    field.samples.resize(samples_);
    for (std::size_t i = 0; i < samples_; ++i) {
        field.samples[i] = {buffer[i][0], buffer[i][1]};
    }
    return field;
}

FieldRealization synthesize_field(const SourceSpec& spec, double dt, double record_length, rng::Stream& stream) {
    FieldSynthesizer synth(spec, dt, record_length);
    return synth(stream);
}

ModeProjector::ModeProjector(const ModeSet& modes, const SourceSpec& spec, const FieldRealization& layout)
    : dt_(layout.dt), t0_(layout.t0) {
    const double half = 0.5 * spec.observation_time;
    if (!(layout.t0 <= -half * (1.0 + 1e-12)) || !(layout.t0 + layout.record_length() >= half * (1.0 - 1e-12))) {
        throw ConfigError("field record does not cover the observation window [-T/2, T/2]");
    }
    const double lead = (-half - layout.t0) / layout.dt;
    const double width = spec.observation_time / layout.dt;
    if (!near_integer(lead, 1e-6) || !near_integer(width, 1e-6)) {
        throw ConfigError("observation window is not aligned with the sample grid");
    }
    begin_ = static_cast<std::size_t>(std::llround(lead));
    window_ = static_cast<std::size_t>(std::llround(width));

    const double scale = layout.dt / std::sqrt(spec.observation_time);
    phases_.resize(modes.count, static_cast<Eigen::Index>(window_));
    for (Eigen::Index m = 0; m < modes.count; ++m) {
        const double freq = static_cast<double>(modes.offset(m)) / spec.observation_time;
        for (std::size_t i = 0; i < window_; ++i) {
            const double arg = 2.0 * kPi * freq * layout.time(begin_ + i);
            phases_(m, static_cast<Eigen::Index>(i)) = scale * std::complex<double>(std::cos(arg), std::sin(arg));
        }
    }
}

Eigen::VectorXcd ModeProjector::operator()(const FieldRealization& field) const {
    if (field.dt != dt_ || field.t0 != t0_ || field.samples.size() < begin_ + window_) {
        throw ConfigError("field layout differs from the projector's");
    }
    const Eigen::Map<const Eigen::VectorXcd> window(field.samples.data() + begin_,
                                                    static_cast<Eigen::Index>(window_));
    return phases_ * window;
}

Eigen::VectorXcd project_onto_modes(const FieldRealization& field, const ModeSet& modes, const SourceSpec& spec) {
    return ModeProjector(modes, spec, field)(field);
}

Eigen::MatrixXcd ModalEnsemble::normal_moments() const {
    return (amplitudes.adjoint() * amplitudes) / static_cast<double>(realizations());
}

Eigen::MatrixXcd ModalEnsemble::anomalous_moments() const {
    return (amplitudes.transpose() * amplitudes) / static_cast<double>(realizations());
}

namespace {

std::pair<stats::BootstrapSummary, stats::BootstrapSummary> bootstrap_product(const Eigen::MatrixXcd& amps,
                                                                            Eigen::Index i, Eigen::Index j,
                                                                            bool conjugate_first,
                                                                            std::uint64_t seed) {
    const auto r = static_cast<std::size_t>(amps.rows());
    // Real and imaginary parts interleaved so they share resamples.
    std::vector<double> re(r);
    std::vector<double> im(r);
    for (std::size_t k = 0; k < r; ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        const std::complex<double> a = conjugate_first ? std::conj(amps(row, i)) : amps(row, i);
        const std::complex<double> v = a * amps(row, j);
        re[k] = v.real();
        im[k] = v.imag();
    }
    const auto stream_id = static_cast<std::uint32_t>((i * 65536 + j) * 2 + (conjugate_first ? 0 : 1));
    return {stats::bootstrap_mean(re, seed, stream_id), stats::bootstrap_mean(im, seed, stream_id)};
}

}  // namespace

std::pair<stats::BootstrapSummary, stats::BootstrapSummary> ModalEnsemble::normal_bootstrap(Eigen::Index i,
                                                                                          Eigen::Index j) const {
    return bootstrap_product(amplitudes, i, j, true, seed);
}

std::pair<stats::BootstrapSummary, stats::BootstrapSummary> ModalEnsemble::anomalous_bootstrap(Eigen::Index i,
                                                                                             Eigen::Index j) const {
    return bootstrap_product(amplitudes, i, j, false, seed);
}

ModalEnsemble synthesize_modal_ensemble(const SourceSpec& spec, const ModeSet& modes, const SynthesisConfig& cfg,
                                        std::int64_t realizations, std::uint64_t seed, unsigned workers) {
    if (realizations < 2) {
        throw ConfigError("ensemble needs at least two realizations");
    }
    cfg.validate(spec);
    ModalEnsemble ensemble;
    ensemble.seed = seed;
    ensemble.amplitudes.resize(realizations, modes.count);
    parallel_for_ranges(static_cast<std::size_t>(realizations), workers, [&](std::size_t begin, std::size_t end) {
        FieldSynthesizer synth(spec, cfg);
        std::unique_ptr<ModeProjector> project;
        for (std::size_t r = begin; r < end; ++r) {
            rng::Stream stream(seed, rng::Purpose::FieldSynthesis, static_cast<std::uint32_t>(r), 0);
            const FieldRealization field = synth(stream);
            if (!project) {
                project = std::make_unique<ModeProjector>(modes, spec, field);
            }
            ensemble.amplitudes.row(static_cast<Eigen::Index>(r)) = (*project)(field).transpose();
        }
    });
    return ensemble;
}

}  // namespace qcrb::modal
