#include "spinrad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spinrad {
namespace quad {
namespace {

// (G7,K15) nodes and weights on [-1,1]; Kronrod nodes, Kronrod weights, then
// Gauss weights on the shared (odd-index) nodes.
constexpr double xk[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double wk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr double wg[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

template <std::size_t N>
struct Segment {
    double a, b;
    std::array<double, N> value;
    std::array<double, N> error;
    double badness;  // max over components of error scaled by the convergence target
};

template <std::size_t N>
void gk15(const std::function<std::array<double, N>(double)>& f, double a, double b,
          std::array<double, N>& value, std::array<double, N>& error) {
    const double h = 0.5 * (b - a);
    const double m = 0.5 * (a + b);
    std::array<double, N> sk{}, sg{};
    for (int i = 0; i < 15; ++i) {
        const auto fv = f(m + h * xk[i]);
        for (std::size_t c = 0; c < N; ++c) sk[c] += wk[i] * fv[c];
        if (i % 2 == 1)
            for (std::size_t c = 0; c < N; ++c) sg[c] += wg[i / 2] * fv[c];
    }
    for (std::size_t c = 0; c < N; ++c) {
        value[c] = sk[c] * h;
        error[c] = std::abs((sk[c] - sg[c]) * h);
    }
}

} // namespace

template <std::size_t N>
QuadResult<N> integrate(const std::function<std::array<double, N>(double)>& f,
                        const std::vector<double>& breaks, const QuadratureConfig& cfg) {
    if (breaks.size() < 2)
        throw std::invalid_argument("quad::integrate: need at least two breakpoints");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1]))
            throw std::invalid_argument("quad::integrate: breakpoints must increase");

    std::vector<Segment<N>> segs;
    segs.reserve(breaks.size() - 1 + cfg.max_refinements);
    QuadResult<N> out;
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        Segment<N> s{breaks[i - 1], breaks[i], {}, {}, 0.0};
        gk15(f, s.a, s.b, s.value, s.error);
        out.evaluations += 15;
        segs.push_back(s);
    }

    int refinements = 0;
    for (;;) {
        std::array<double, N> total{}, toterr{}, l1{};
        for (const auto& s : segs)
            for (std::size_t c = 0; c < N; ++c) {
                total[c] += s.value[c];
                toterr[c] += s.error[c];
                l1[c] += std::abs(s.value[c]);
            }
        // the l1 term is a roundoff floor: when a component nearly cancels
        // across segments, a pure relative target sits below attainable
        // precision and refinement would only chase noise
        std::array<double, N> target{};
        bool done = true;
        for (std::size_t c = 0; c < N; ++c) {
            target[c] = std::max({cfg.abs_tol, cfg.rel_tol * std::abs(total[c]),
                                  100.0 * std::numeric_limits<double>::epsilon() * l1[c]});
            if (toterr[c] > target[c]) done = false;
        }
        if (done) {
            out.value = total;
            out.error = toterr;
            return out;
        }
        if (refinements >= cfg.max_refinements) {
            std::ostringstream msg;
            msg << "quad::integrate: no convergence after " << refinements << " refinements";
            std::vector<double> pv(total.begin(), total.end());
            std::vector<double> pe(toterr.begin(), toterr.end());
            throw QuadratureNonConvergence(msg.str(), std::move(pv), std::move(pe));
        }
        // pick the worst segment; scale each component error by its own target.
        // strict > keeps the first (leftmost-created) segment on ties: deterministic.
        std::size_t worst = 0;
        double worst_badness = -1.0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            double badness = 0.0;
            for (std::size_t c = 0; c < N; ++c)
                badness = std::max(badness, segs[i].error[c] / std::max(target[c], 1e-300));
            if (badness > worst_badness) {
                worst_badness = badness;
                worst = i;
            }
        }
        Segment<N> left = segs[worst], right;
        const double mid = 0.5 * (left.a + left.b);
        if (mid <= left.a || mid >= left.b) {
            // interval exhausted by floating point; accept what we have
            std::array<double, N> pvv{}, pee{};
            for (const auto& s : segs)
                for (std::size_t c = 0; c < N; ++c) {
                    pvv[c] += s.value[c];
                    pee[c] += s.error[c];
                }
            out.value = pvv;
            out.error = pee;
            return out;
        }
        right.a = mid;
        right.b = left.b;
        left.b = mid;
        gk15(f, left.a, left.b, left.value, left.error);
        gk15(f, right.a, right.b, right.value, right.error);
        out.evaluations += 30;
        segs[worst] = left;
        segs.push_back(right);
        ++refinements;
    }
}

QuadResult<1> integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureConfig& cfg) {
    std::function<std::array<double, 1>(double)> g = [&f](double x) {
        return std::array<double, 1>{f(x)};
    };
    return integrate<1>(g, std::vector<double>{a, b}, cfg);
}

template <std::size_t N>
QuadResult<N> integrate_to_infinity(const std::function<std::array<double, N>(double)>& f,
                                    const std::vector<double>& seed_breaks,
                                    const QuadratureConfig& cfg, int max_doublings) {
    QuadResult<N> acc = integrate<N>(f, seed_breaks, cfg);
    double lo = seed_breaks.back();
    for (int d = 0; d < max_doublings; ++d) {
        const double hi = 2.0 * lo;
        QuadResult<N> ext = integrate<N>(f, {lo, hi}, cfg);
        bool negligible = true;
        for (std::size_t c = 0; c < N; ++c) {
            acc.value[c] += ext.value[c];
            acc.error[c] += ext.error[c];
            const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(acc.value[c]));
            // strict >: an identically zero extension (zero target included)
            // counts as settled
            if (std::abs(ext.value[c]) > 0.1 * target) negligible = false;
        }
        acc.evaluations += ext.evaluations;
        lo = hi;
        if (negligible) return acc;
    }
    std::vector<double> pv(acc.value.begin(), acc.value.end());
    std::vector<double> pe(acc.error.begin(), acc.error.end());
    throw QuadratureNonConvergence("quad::integrate_to_infinity: tail did not settle",
                                   std::move(pv), std::move(pe));
}

template QuadResult<1> integrate<1>(const std::function<std::array<double, 1>(double)>&,
                                    const std::vector<double>&, const QuadratureConfig&);
template QuadResult<2> integrate<2>(const std::function<std::array<double, 2>(double)>&,
                                    const std::vector<double>&, const QuadratureConfig&);
template QuadResult<3> integrate<3>(const std::function<std::array<double, 3>(double)>&,
                                    const std::vector<double>&, const QuadratureConfig&);
template QuadResult<4> integrate<4>(const std::function<std::array<double, 4>(double)>&,
                                    const std::vector<double>&, const QuadratureConfig&);
template QuadResult<1> integrate_to_infinity<1>(const std::function<std::array<double, 1>(double)>&,
                                                const std::vector<double>&,
                                                const QuadratureConfig&, int);
template QuadResult<2> integrate_to_infinity<2>(const std::function<std::array<double, 2>(double)>&,
                                                const std::vector<double>&,
                                                const QuadratureConfig&, int);
template QuadResult<3> integrate_to_infinity<3>(const std::function<std::array<double, 3>(double)>&,
                                                const std::vector<double>&,
                                                const QuadratureConfig&, int);

} // namespace quad
} // namespace spinrad
