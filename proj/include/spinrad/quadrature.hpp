#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace spinrad {

/// Tolerances and refinement budget shared by every adaptive integral.
struct QuadratureConfig {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    int max_refinements = 4000;
};

template <std::size_t N>
struct QuadResult {
    std::array<double, N> value{};
    std::array<double, N> error{};
    long evaluations = 0;
};

/// Thrown when the refinement budget is exhausted; carries the partial result.
class QuadratureNonConvergence : public std::runtime_error {
public:
    QuadratureNonConvergence(std::string what, std::vector<double> partial,
                             std::vector<double> achieved)
        : std::runtime_error(std::move(what)),
          partial_value(std::move(partial)),
          achieved_error(std::move(achieved)) {}
    std::vector<double> partial_value;
    std::vector<double> achieved_error;
};

namespace quad {

/// Globally adaptive (G7,K15) rule over the panels delimited by `breaks`
/// (strictly increasing, at least two entries). Converges when every component
/// satisfies err <= max(abs_tol, rel_tol * |value|). Refinement always bisects
/// the segment with the largest scaled error, ties broken by position, so the
/// evaluation sequence is deterministic.
template <std::size_t N>
QuadResult<N> integrate(const std::function<std::array<double, N>(double)>& f,
                        const std::vector<double>& breaks, const QuadratureConfig& cfg);

/// Convenience scalar form on a single interval.
QuadResult<1> integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureConfig& cfg);

/// Semi-infinite integral of a decaying integrand: adaptive over the seed panels
/// (last break is the initial cutoff), then the domain is doubled ([cut, 2 cut],
/// ...) until an extension contributes less than 0.1x the working tolerance.
/// Throws QuadratureNonConvergence if the tail never settles within `max_doublings`.
template <std::size_t N>
QuadResult<N> integrate_to_infinity(const std::function<std::array<double, N>(double)>& f,
                                    const std::vector<double>& seed_breaks,
                                    const QuadratureConfig& cfg, int max_doublings = 40);

} // namespace quad
} // namespace spinrad
