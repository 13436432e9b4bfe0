#include "stoconv/scheme.hpp"

#include "stoconv/estimators.hpp"
#include "stoconv/taming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stoconv {

SchemeSetup::SchemeSetup(SpectralOperator op_, NoiseOperator noise_, ProjectionIndex h_index_,
                         ProjectionIndex u_index_)
    : op(std::move(op_)), noise(std::move(noise_)), h_index(std::move(h_index_)),
      u_index(std::move(u_index_))
{
    if (noise.h_modes() != op.size()) {
        throw std::invalid_argument("noise operator has " + std::to_string(noise.h_modes()) +
                                    " H-modes but the operator has " + std::to_string(op.size()));
    }
    if (h_index.available() != op.size() || u_index.available() != noise.u_modes()) {
        throw std::invalid_argument("projection index sets do not match the truncated bases");
    }
}

SchemeSetup SchemeSetup::prefix(SpectralOperator op, NoiseOperator noise, std::size_t n_keep,
                                std::size_t k_keep)
{
    auto h_index = ProjectionIndex::prefix(n_keep, op.size());
    auto u_index = ProjectionIndex::prefix(k_keep, noise.u_modes());
    return SchemeSetup(std::move(op), std::move(noise), std::move(h_index), std::move(u_index));
}

TruncationPolicy TruncationPolicy::bernoulli(double q)
{
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("bernoulli truncation probability must lie in [0, 1]");
    }
    TruncationPolicy p;
    p.kind = TruncationKind::bernoulli;
    p.q = q;
    return p;
}

TruncationPolicy TruncationPolicy::norm_threshold(double threshold, double exponent)
{
    if (!(threshold > 0.0) || !std::isfinite(exponent)) {
        throw std::invalid_argument("norm threshold needs c > 0 and a finite exponent");
    }
    TruncationPolicy p;
    p.kind = TruncationKind::norm_threshold;
    p.threshold = threshold;
    p.exponent = exponent;
    return p;
}

PathTruncation::PathTruncation(const TruncationPolicy& policy, std::size_t steps,
                               RandomStream& stream)
    : kind_(policy.kind)
{
    switch (kind_) {
    case TruncationKind::identity:
        break;
    case TruncationKind::bernoulli:
        // F_0-measurable: drawn before any increment of the path
        fixed_ = stream.uniform() < policy.q ? 0.0 : 1.0;
        break;
    case TruncationKind::norm_threshold:
        radius_ = policy.threshold * std::pow(static_cast<double>(steps), policy.exponent);
        break;
    }
}

double PathTruncation::operator()(const SchemeState& state) const
{
    switch (kind_) {
    case TruncationKind::identity:
        return 1.0;
    case TruncationKind::bernoulli:
        return fixed_;
    case TruncationKind::norm_threshold:
        return state.value.norm() <= radius_ ? 1.0 : 0.0;
    }
    return 1.0;
}

SchemeState scheme_step(const SchemeState& state, double h, const StateVector& xinc, double chi,
                        const SpectralOperator& op)
{
    if (!(h >= 0.0)) {
        throw std::invalid_argument("scheme step must be nonnegative");
    }
    if (!(chi >= 0.0 && chi <= 1.0)) {
        throw std::invalid_argument("truncation value must lie in [0, 1]");
    }
    const double taming = chi / (1.0 + xinc.squaredNorm());
    return SchemeState{state.t + h, semigroup_apply(op, h, state.value + taming * xinc)};
}

CoupledSimulator::CoupledSimulator(TimeGrid grid, SchemeSetup setup, TruncationPolicy policy)
    : grid_(std::move(grid)), setup_(std::move(setup)), policy_(policy),
      projected_(setup_.projected_noise())
{
    std::map<double, std::size_t> by_step;
    law_of_step_.resize(grid_.steps());
    for (std::size_t m = 0; m < grid_.steps(); ++m) {
        const double h = grid_.step(m);
        auto [it, inserted] = by_step.emplace(h, laws_.size());
        if (inserted) {
            Eigen::VectorXd decay(static_cast<Eigen::Index>(setup_.op.size()));
            for (std::size_t n = 0; n < setup_.op.size(); ++n) {
                decay[static_cast<Eigen::Index>(n)] = std::exp(setup_.op.eigenvalue(n) * h);
            }
            laws_.push_back(StepLaw{IncrementCovariance::build(setup_.op, setup_.noise, h),
                                    std::move(decay)});
        }
        law_of_step_[m] = it->second;
    }
}

const CoupledSimulator::StepLaw& CoupledSimulator::law_for(std::size_t m) const
{
    return laws_[law_of_step_[m]];
}

CoupledTrajectory CoupledSimulator::simulate(RandomStream& stream) const
{
    const std::size_t steps = grid_.steps();
    const auto n_h = static_cast<Eigen::Index>(setup_.op.size());
    PathTruncation truncation(policy_, steps, stream);

    CoupledTrajectory path;
    path.times = grid_.nodes();
    path.scheme.reserve(steps + 1);
    path.exact.reserve(steps + 1);
    path.chi.reserve(steps);
    path.increments.reserve(steps);

    SchemeState state{0.0, StateVector::Zero(n_h)};
    StateVector exact = StateVector::Zero(n_h);
    path.scheme.push_back(state.value);
    path.exact.push_back(exact);

    StateVector y;
    NoiseVector dw;
    for (std::size_t m = 0; m < steps; ++m) {
        const StepLaw& law = law_for(m);
        const double chi = truncation(state);
        law.cov.sample(stream, y, dw);
        const StateVector x = projected_.apply(dw);
        const double taming = chi / (1.0 + x.squaredNorm());
        state.value = law.decay.cwiseProduct(state.value + taming * x);
        state.t = path.times[m + 1];
        exact = law.decay.cwiseProduct(exact) + y;

        path.chi.push_back(chi);
        path.increments.push_back(dw);
        path.scheme.push_back(state.value);
        path.exact.push_back(exact);
    }
    return path;
}

std::vector<StateVector> CoupledSimulator::simulate_scheme(RandomStream& stream,
                                                           std::vector<double>* chi_out) const
{
    const std::size_t steps = grid_.steps();
    const auto n_h = static_cast<Eigen::Index>(setup_.op.size());
    const auto n_u = static_cast<Eigen::Index>(setup_.noise.u_modes());
    PathTruncation truncation(policy_, steps, stream);

    std::vector<StateVector> values;
    values.reserve(steps + 1);
    SchemeState state{0.0, StateVector::Zero(n_h)};
    values.push_back(state.value);
    if (chi_out) {
        chi_out->clear();
    }
    NoiseVector dw(n_u);
    for (std::size_t m = 0; m < steps; ++m) {
        const StepLaw& law = law_for(m);
        const double chi = truncation(state);
        const double sd = std::sqrt(grid_.step(m));
        for (Eigen::Index j = 0; j < n_u; ++j) {
            dw[j] = sd * stream.normal();
        }
        const StateVector x = projected_.apply(dw);
        const double taming = chi / (1.0 + x.squaredNorm());
        state.value = law.decay.cwiseProduct(state.value + taming * x);
        values.push_back(state.value);
        if (chi_out) {
            chi_out->push_back(chi);
        }
    }
    return values;
}

CoupledTrajectory simulate_coupled(const TimeGrid& grid, const SchemeSetup& setup,
                                   const TruncationPolicy& policy, RandomStream& stream)
{
    return CoupledSimulator(grid, setup, policy).simulate(stream);
}

double truncation_defect(const TruncationPolicy& policy, const TimeGrid& grid, double p,
                         double rho, std::size_t trials, std::uint64_t seed,
                         const SchemeSetup* setup)
{
    if (trials == 0) {
        throw std::invalid_argument("truncation defect needs at least one trial");
    }
    if (!(p >= 1.0) || !(rho >= 0.0)) {
        throw std::invalid_argument("truncation defect needs p >= 1 and rho >= 0");
    }
    const double scale = std::pow(static_cast<double>(grid.steps()), p * rho);
    switch (policy.kind) {
    case TruncationKind::identity:
        return 0.0;
    case TruncationKind::bernoulli:
        // |chi - 1|^p is the indicator of the drop event, at every node
        return policy.q * scale;
    case TruncationKind::norm_threshold:
        break;
    }
    if (!setup) {
        throw std::invalid_argument("state-dependent truncation needs a scheme setup");
    }
    const CoupledSimulator sim(grid, *setup, policy);
    const Eigen::MatrixXd drops =
        run_paths(trials, seed, 1, [&](std::size_t, RandomStream& stream) {
            std::vector<double> chi;
            sim.simulate_scheme(stream, &chi);
            Eigen::VectorXd row(static_cast<Eigen::Index>(chi.size()));
            for (std::size_t m = 0; m < chi.size(); ++m) {
                row[static_cast<Eigen::Index>(m)] = std::pow(std::abs(chi[m] - 1.0), p);
            }
            return row;
        });
    return drops.colwise().mean().maxCoeff() * scale;
}

double truncation_constant(double defect, double p, double rho, double horizon)
{
    if (!(defect >= 0.0) || !(p >= 1.0) || !(horizon > 0.0)) {
        throw std::invalid_argument("invalid truncation constant inputs");
    }
    // E|chi-1|^p M^{p rho} <= D  <=>  ||chi-1||_p <= D^{1/p} T^{-rho} (T/M)^rho
    return std::max(1.0, std::pow(defect, 1.0 / p) * std::pow(horizon, -rho));
}

McEstimate ito_representation_gap(const SchemeSetup& setup, const TimeGrid& grid,
                                  const TruncationPolicy& policy, std::size_t substeps,
                                  std::size_t paths, std::uint64_t seed, std::size_t threads)
{
    if (substeps == 0) {
        throw std::invalid_argument("representation check needs at least one substep");
    }
    const NoiseOperator b = setup.projected_noise();
    const auto n_h = static_cast<Eigen::Index>(setup.op.size());
    const auto n_u = static_cast<Eigen::Index>(b.u_modes());
    const std::size_t steps = grid.steps();

    const Eigen::MatrixXd gaps = run_paths(paths, seed, threads, [&](std::size_t,
                                                                      RandomStream& stream) {
        PathTruncation truncation(policy, steps, stream);
        SchemeState state{0.0, StateVector::Zero(n_h)};
        StateVector represented = StateVector::Zero(n_h);
        Eigen::VectorXd row(static_cast<Eigen::Index>(steps + 1));
        row[0] = 0.0;
        NoiseVector dw_fine(n_u);
        for (std::size_t m = 0; m < steps; ++m) {
            const double h = grid.step(m);
            const double delta = h / static_cast<double>(substeps);
            const double sd = std::sqrt(delta);
            const double chi = truncation(state);

            NoiseVector dw_total = NoiseVector::Zero(n_u);
            StateVector accumulated = StateVector::Zero(n_h);
            for (std::size_t k = 0; k < substeps; ++k) {
                for (Eigen::Index j = 0; j < n_u; ++j) {
                    dw_fine[j] = sd * stream.normal();
                }
                // X at the left point of the substep
                const StateVector x = b.apply(dw_total);
                accumulated += psi_prime_apply(x, b.apply(dw_fine)) + delta * ito_drift(x, b);
                dw_total += dw_fine;
            }
            state = scheme_step(state, h, b.apply(dw_total), chi, setup.op);
            represented = semigroup_apply(setup.op, h, represented + chi * accumulated);
            row[static_cast<Eigen::Index>(m + 1)] = (state.value - represented).norm();
        }
        return row;
    });
    McEstimate est = sup_node_lp(gaps, 2.0);
    est.seed = seed;
    return est;
}

} // namespace stoconv
