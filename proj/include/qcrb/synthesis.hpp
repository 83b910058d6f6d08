#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "qcrb/modal.hpp"
#include "qcrb/rng.hpp"
#include "qcrb/stats.hpp"

namespace qcrb::modal {

/// One sampled record of the complex baseband envelope (carrier factored out),
/// in sqrt(photons/s). Sample i sits at the cell midpoint t0 + (i + 1/2) dt.
struct FieldRealization {
    std::vector<std::complex<double>> samples;
    double dt = 0.0;
    double t0 = 0.0;

    double record_length() const { return dt * static_cast<double>(samples.size()); }
    double time(std::size_t i) const { return t0 + (static_cast<double>(i) + 0.5) * dt; }
};

/// Sampling grid of the synthesized record. The record [-Tr/2, Tr/2] is
/// periodic with period Tr = record_factor * T; spectral lines sit at k/Tr.
struct SynthesisConfig {
    int samples_per_coherence = 4;  // dt = tau_c / samples_per_coherence
    int record_factor = 16;         // Tr = record_factor * T

    void validate(const SourceSpec& spec) const;
};

/// Frequency-domain synthesizer of the flat-band Gaussian field.
///
/// Independent circular complex Gaussian coefficients are placed on the lines
/// |k/Tr| <= delta_nu/2, the two band-edge lines at half power, and the record
/// is formed by a single FFT. The process is stationary with lag-0 power
/// exactly n0 delta_nu. Not thread-safe; use one instance per thread.
class FieldSynthesizer {
public:
    FieldSynthesizer(const SourceSpec& spec, double dt, double record_length);
    FieldSynthesizer(const SourceSpec& spec, const SynthesisConfig& cfg);
    ~FieldSynthesizer();
    FieldSynthesizer(const FieldSynthesizer&) = delete;
    FieldSynthesizer& operator=(const FieldSynthesizer&) = delete;

    FieldRealization operator()(rng::Stream& stream);

    /// Sum of |c_k|^2 over the lines of the most recent realization; equals
    /// the time-averaged power by Parseval.
    double last_spectral_power() const { return last_spectral_power_; }
    std::size_t sample_count() const { return samples_; }
    std::size_t line_count() const { return line_weights_.size(); }

private:
    struct Plan;
    std::unique_ptr<Plan> plan_;
    double n0_;
    double dt_;
    double period_;
    double t0_;
    std::size_t samples_;
    std::int64_t first_line_;
    std::vector<double> line_weights_;
    double last_spectral_power_ = 0.0;
};

/// Free-function form: builds a synthesizer and draws one record.
FieldRealization synthesize_field(const SourceSpec& spec, double dt, double record_length, rng::Stream& stream);

/// Riemann-sum approximation of a_m = int E(t) phi_m^*(t) dt over [-T/2, T/2]
/// for every mode in the set, at baseband. Caches the mode phases.
class ModeProjector {
public:
    ModeProjector(const ModeSet& modes, const SourceSpec& spec, const FieldRealization& layout);
    Eigen::VectorXcd operator()(const FieldRealization& field) const;

private:
    std::size_t begin_ = 0;
    std::size_t window_ = 0;
    double dt_ = 0.0;
    double t0_ = 0.0;
    Eigen::MatrixXcd phases_;  // modes x window samples, includes dt / sqrt(T)
};

Eigen::VectorXcd project_onto_modes(const FieldRealization& field, const ModeSet& modes, const SourceSpec& spec);

/// Modal amplitudes of many independent synthesized realizations.
struct ModalEnsemble {
    Eigen::MatrixXcd amplitudes;  // realizations x modes
    std::uint64_t seed = 0;

    Eigen::Index realizations() const { return amplitudes.rows(); }
    /// Ensemble mean of conj(a_i) a_j, estimating <a_i^dagger a_j>.
    Eigen::MatrixXcd normal_moments() const;
    /// Ensemble mean of a_i a_j, estimating <a_i a_j>.
    Eigen::MatrixXcd anomalous_moments() const;
    /// Bootstrap of Re and Im of mean conj(a_i) a_j.
    std::pair<stats::BootstrapSummary, stats::BootstrapSummary> normal_bootstrap(Eigen::Index i, Eigen::Index j) const;
    std::pair<stats::BootstrapSummary, stats::BootstrapSummary> anomalous_bootstrap(Eigen::Index i, Eigen::Index j) const;
};

/// Realization r draws from the FieldSynthesis substream (seed, r, 0); the
/// result does not depend on `workers`.
ModalEnsemble synthesize_modal_ensemble(const SourceSpec& spec, const ModeSet& modes, const SynthesisConfig& cfg,
                                        std::int64_t realizations, std::uint64_t seed, unsigned workers = 1);

}  // namespace qcrb::modal
