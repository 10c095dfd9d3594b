#include "hivdt/equilibria.hpp"

namespace hivdt {

ReproductionNumbers reproduction_numbers(const Parameters& par)
{
    const double r0 = par.beta * par.n_virions * par.lambda / (par.d * par.mu);
    const double immune_margin = par.lambda * par.c * par.mu - par.beta * par.s * par.a * par.n_virions;
    const double r1 = par.beta * par.n_virions * immune_margin / (par.d * par.c * par.mu * par.mu);
    return ReproductionNumbers{r0, r1};
}

EquilibriumSet equilibrium_set(const Parameters& par)
{
    EquilibriumSet set;
    set.numbers = reproduction_numbers(par);
    set.e0 = State{par.lambda / par.d, 0.0, 0.0, 0.0};

    if (set.numbers.r0 > 1.0) {
        const double excess = par.beta * par.n_virions * par.lambda - par.d * par.mu;
        set.e_star = State{par.mu / (par.beta * par.n_virions),
                           excess / (par.beta * par.n_virions * par.a),
                           excess / (par.beta * par.mu), 0.0};
    }
    if (set.numbers.r1 > 1.0) {
        // r1 > 1 implies lambda*c*mu - beta*s*a*N > 0, so the denominators
        // below are positive.
        const double margin = par.lambda * par.c * par.mu - par.beta * par.s * par.a * par.n_virions;
        const double mu2 = par.mu * par.mu;
        set.e_bar = State{margin / (par.d * par.c * par.mu),
                          par.d * par.mu * par.s / margin,
                          par.s * par.a * par.n_virions * par.d / margin,
                          (par.beta * par.a * par.n_virions * margin - par.a * par.d * par.c * mu2) /
                              (par.p * par.d * par.c * mu2)};
    }
    return set;
}

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::DiseaseFreeStable:
        return "DiseaseFreeStable";
    case Regime::NoImmuneEndemic:
        return "NoImmuneEndemic";
    case Regime::ImmuneEndemic:
        return "ImmuneEndemic";
    }
    return "unknown";
}

RegimeClassification classify_regime(const ReproductionNumbers& nums, const EquilibriumSet& eqs)
{
    if (nums.r0 <= 1.0) {
        return RegimeClassification{Regime::DiseaseFreeStable, eqs.e0};
    }
    if (nums.r1 <= 1.0) {
        return RegimeClassification{Regime::NoImmuneEndemic, eqs.e_star.value()};
    }
    return RegimeClassification{Regime::ImmuneEndemic, eqs.e_bar.value()};
}

std::optional<InfectedOrderingWitness> check_infected_ordering(const Parameters& par)
{
    const ReproductionNumbers nums = reproduction_numbers(par);
    if (!(nums.r1 < 1.0 && 1.0 < nums.r0)) {
        return std::nullopt;
    }
    const double y_star = par.lambda * (nums.r0 - 1.0) / (par.a * nums.r0);
    const double y_bar = par.s * par.beta * par.n_virions / (par.mu * par.c * nums.r1);
    return InfectedOrderingWitness{y_star, y_bar, y_star < y_bar};
}

} // namespace hivdt
