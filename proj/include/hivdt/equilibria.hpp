#ifndef HIVDT_EQUILIBRIA_HPP
#define HIVDT_EQUILIBRIA_HPP

#include <optional>
#include <string>

#include "hivdt/model.hpp"

namespace hivdt {

/// The two threshold quantities controlling which equilibrium attracts.
struct ReproductionNumbers {
    double r0; // basic reproduction number, beta*N*lambda / (d*mu)
    double r1; // humoural immune response number, beta*N*(lambda*c*mu - beta*s*a*N) / (d*c*mu^2)
};

ReproductionNumbers reproduction_numbers(const Parameters& par);

/// The three equilibria of the scheme. e_star exists iff r0 > 1, e_bar iff
/// r1 > 1; absence is encoded as an empty optional.
struct EquilibriumSet {
    State e0;
    std::optional<State> e_star;
    std::optional<State> e_bar;
    ReproductionNumbers numbers;
};

EquilibriumSet equilibrium_set(const Parameters& par);

enum class Regime {
    DiseaseFreeStable, // r0 <= 1
    NoImmuneEndemic,   // r1 <= 1 < r0
    ImmuneEndemic,     // r1 > 1
};

std::string to_string(Regime r);

struct RegimeClassification {
    Regime kind;
    State predicted_attractor;
};

/// Maps the thresholds onto the globally stable equilibrium. Boundary ties
/// (r0 == 1, r1 == 1) classify with the stable side, exact comparison.
RegimeClassification classify_regime(const ReproductionNumbers& nums, const EquilibriumSet& eqs);

/// Witness of Y* < Ybar, the ordering used inside the e_star stability
/// argument. Empty when the hypothesis r1 < 1 < r0 does not hold.
struct InfectedOrderingWitness {
    double y_star;
    double y_bar;
    bool holds;
};

std::optional<InfectedOrderingWitness> check_infected_ordering(const Parameters& par);

} // namespace hivdt

#endif
