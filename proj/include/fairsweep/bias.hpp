#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairsweep/population.hpp"

namespace fairsweep {

// The three training-data corruption families:
//   underestimate_b — qualified group-b agents are labeled unqualified with
//                     probability 1 - beta, so the believed gamma_b is
//                     beta * gamma_b (beta in (0, 1], 1 = no bias).
//   overestimate_a  — unqualified group-a agents are labeled qualified with
//                     probability beta, so the believed gamma_a is
//                     (1 - beta) * gamma_a + beta (beta in [0, 1), 0 = no bias).
//   feature_shift_b — group-b scores of the targeted class are systematically
//                     measured low by shift(x) >= 0.
enum class BiasFamily { underestimate_b, overestimate_a, feature_shift_b };

const char* bias_family_name(BiasFamily f);
BiasFamily bias_family_from_name(const std::string& name);

enum class ShiftTarget { qualified, unqualified, all };

const char* shift_target_name(ShiftTarget t);
ShiftTarget shift_target_from_name(const std::string& name);

// Score-dependent downward measurement shift: the believed density of the
// targeted class is f_hat(x) = f(x + shift(x)), renormalized. Supported
// profiles: constant, affine max(0, slope * (x - x0)) with slope in [0, 1)
// (keeps x + shift(x) increasing), and a user-supplied table (linearly
// interpolated, clamped to its end values outside the table).
struct ShiftSpec {
    enum class Kind { constant, affine, tabulated };

    Kind kind = Kind::constant;
    double epsilon = 0.0;              // constant profile
    double slope = 0.0, x0 = 0.0;      // affine profile
    std::vector<double> grid, values;  // tabulated profile
    ShiftTarget target = ShiftTarget::qualified;

    static ShiftSpec constant(double epsilon, ShiftTarget target = ShiftTarget::qualified);
    static ShiftSpec affine(double slope, double x0, ShiftTarget target = ShiftTarget::qualified);
    static ShiftSpec tabulated(std::vector<double> grid, std::vector<double> values,
                               ShiftTarget target = ShiftTarget::qualified);

    // Shift magnitude at score x (validated nonnegative at construction).
    double at(double x) const;
    bool is_zero() const;
};

struct BiasSpec {
    BiasFamily family = BiasFamily::underestimate_b;
    double beta = 1.0;   // label families only
    ShiftSpec shift;     // feature family only

    static BiasSpec underestimate_b(double beta);
    static BiasSpec overestimate_a(double beta);
    static BiasSpec feature_shift_b(ShiftSpec shift);
};

struct BiasDiagnostics {
    // |integral - 1| of a transformed class density before renormalization.
    double renorm_defect = 0.0;
    // Probability mass pushed outside the score range by a shift.
    double clipped_mass = 0.0;
    // Largest deviation of the believed overall density from the true one at
    // the transform grid nodes (label families preserve the mixture).
    double mixture_defect = 0.0;
    // Fraction of probe scores where the believed likelihood ratio does not
    // exceed the true one (qualified-only shifts push it down on the upper
    // score range; informational).
    double lr_le_true_fraction = 0.0;
};

// A ground-truth population together with the population a decision-maker
// would infer from corrupted training data.
struct BiasedPopulation {
    Population biased;
    Population truth;
    BiasSpec spec;
    BiasDiagnostics diagnostics;
};

BiasedPopulation apply_underestimate_b(const Population& pop, double beta);
BiasedPopulation apply_overestimate_a(const Population& pop, double beta);
BiasedPopulation apply_feature_shift_b(const Population& pop, const ShiftSpec& shift);
BiasedPopulation apply_bias(const Population& pop, const BiasSpec& spec);

// Rebuilds the population with group b's targeted class densities shifted by
// scale * shift(x). scale may be negative (an upward shift); used for
// finite-difference probes around an operating point. When diag is given,
// clipped mass and renormalization drift are accumulated into it.
Population shift_population_scaled(const Population& pop, const ShiftSpec& shift,
                                   double scale, BiasDiagnostics* diag = nullptr);

// Draws n records as a decision-maker would see them. Label families draw
// ground-truth triples and corrupt the label through the flip channel (an
// independent route to the analytic density transforms); the feature family
// draws scores from the shifted densities. Deterministic under seed.
std::vector<LabeledRecord> sample_dataset(const BiasedPopulation& bp, std::size_t n,
                                          std::uint64_t seed);

// Both label-flip channels applied together at the sample level (group b
// qualified flipped down at rate 1 - beta_b, group a unqualified flipped up
// at rate beta_a). The analytic transforms stay single-family.
std::vector<LabeledRecord> sample_composed_flips(const Population& truth, double beta_b,
                                                 double beta_a, std::size_t n,
                                                 std::uint64_t seed);

} // namespace fairsweep
