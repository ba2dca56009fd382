#include "abwave/eikonal.hpp"

#include "abwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace abwave {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr int kMaxDepth = 24;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= kMaxDepth || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double scale) {
    const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = kQuadTol * std::max(1.0, std::abs(scale));
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 0);
}

} // namespace

double RayPath::length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) s += (vertices[i] - vertices[i - 1]).norm();
    return s;
}

EikonalSolution eikonal_phase(const RayPath& path, const PotentialField& field, double energy,
                              double q, double m, double time) {
    if (path.vertices.size() < 2) throw ConfigError("eikonal_phase: path needs >= 2 vertices");
    EikonalSolution sol;
    for (std::size_t seg = 1; seg < path.vertices.size(); ++seg) {
        const Vec2 p0 = path.vertices[seg - 1];
        const Vec2 p1 = path.vertices[seg];
        const Vec2 d = p1 - p0;
        const double len = d.norm();
        if (len == 0.0) throw ConfigError("eikonal_phase: consecutive vertices coincide");
        auto k_local = [&](double s) {
            const Vec2 p = p0 + d * s;
            const double ksq = 2.0 * m * (energy + q * field.phi(p.x, p.y, time));
            if (ksq < 0.0)
                throw NumericalError("eikonal_phase: turning point (classically forbidden)");
            return std::sqrt(ksq);
        };
        const double phi_part = len * integrate(k_local, 0.0, 1.0, k_local(0.5));
        const double a_part = q * edge_line_integral(field, p0, p1, time);
        sol.per_segment.push_back(phi_part + a_part);
        sol.s_total += sol.per_segment.back();
        const Vec2 mid = p0 + d * 0.5;
        const Vec2 that = d * (1.0 / len);
        sol.k_mid.push_back(k_local(0.5) + q * field.a(mid.x, mid.y, time).dot(that));
    }
    return sol;
}

double ab_phase_difference(const RayPath& path1, const RayPath& path2,
                           const PotentialField& field, double energy, double q, double m) {
    if (path1.vertices.empty() || path2.vertices.empty())
        throw ConfigError("ab_phase_difference: empty path");
    const double tol = 1e-9;
    if ((path1.vertices.front() - path2.vertices.front()).norm() > tol ||
        (path1.vertices.back() - path2.vertices.back()).norm() > tol)
        throw ConfigError("ab_phase_difference: paths must share endpoints");
    return eikonal_phase(path1, field, energy, q, m).s_total -
           eikonal_phase(path2, field, energy, q, m).s_total;
}

EikonalSolution covariant_eikonal_phase(const RayPath4& path, const PotentialField& field,
                                        double m, double q) {
    if (path.vertices.size() < 2)
        throw ConfigError("covariant_eikonal_phase: path needs >= 2 vertices");
    EikonalSolution sol;
    for (std::size_t seg = 1; seg < path.vertices.size(); ++seg) {
        const Vec4 a = path.vertices[seg - 1];
        const Vec4 b = path.vertices[seg];
        const Vec4 d = b - a;
        const double s2 = d.minkowski(d);
        if (s2 < 0.0) throw NumericalError("covariant_eikonal_phase: spacelike segment");
        const double dtau = std::sqrt(s2);
        // q int (Phi dt + A . dx) along the segment
        auto coupling = [&](double s) {
            const Vec4 p = a + d * s;
            const double phi = field.phi(p.x, p.y, p.t);
            const Vec2 A = field.a(p.x, p.y, p.t);
            return phi * d.t + A.x * d.x + A.y * d.y;
        };
        const double pot = q * integrate(coupling, 0.0, 1.0, coupling(0.5));
        sol.per_segment.push_back(pot - m * dtau);
        sol.s_total += sol.per_segment.back();
        sol.k_mid.push_back(dtau > 0.0 ? m * d.spatial_norm() / dtau : 0.0);
    }
    return sol;
}

EikonalSolution energy_eigen_eikonal(const RayPath& path, const PotentialField& field,
                                     double total_energy, double m, double q, double time) {
    if (path.vertices.size() < 2)
        throw ConfigError("energy_eigen_eikonal: path needs >= 2 vertices");
    EikonalSolution sol;
    for (std::size_t seg = 1; seg < path.vertices.size(); ++seg) {
        const Vec2 p0 = path.vertices[seg - 1];
        const Vec2 p1 = path.vertices[seg];
        const Vec2 d = p1 - p0;
        const double len = d.norm();
        if (len == 0.0) throw ConfigError("energy_eigen_eikonal: consecutive vertices coincide");
        auto k_local = [&](double s) {
            const Vec2 p = p0 + d * s;
            const double w = total_energy + q * field.phi(p.x, p.y, time);
            const double ksq = w * w - m * m;
            if (ksq < 0.0)
                throw NumericalError("energy_eigen_eikonal: forbidden region (below mass shell)");
            return std::sqrt(ksq);
        };
        const double phi_part = len * integrate(k_local, 0.0, 1.0, k_local(0.5));
        const double a_part = q * edge_line_integral(field, p0, p1, time);
        sol.per_segment.push_back(phi_part + a_part);
        sol.s_total += sol.per_segment.back();
        const Vec2 mid = p0 + d * 0.5;
        const Vec2 that = d * (1.0 / len);
        sol.k_mid.push_back(k_local(0.5) + q * field.a(mid.x, mid.y, time).dot(that));
    }
    return sol;
}

double relativistic_kinetic_energy(double v, double m) {
    return m * (1.0 / std::sqrt(1.0 - v * v) - 1.0);
}

Vec4 fixed_gauge_wavevector(const PotentialField& field, const Vec2& source_point, const Vec2& x,
                            const Vec4& k0, double q, double time) {
    const double dphi = field.phi(x.x, x.y, time) - field.phi(source_point.x, source_point.y, time);
    const Vec2 da = field.a(x.x, x.y, time) - field.a(source_point.x, source_point.y, time);
    return {k0.t - q * dphi, k0.x - q * da.x, k0.y - q * da.y, k0.z};
}

HJResidual hj_residual(const WaveField& state, const PotentialField& field, double energy,
                       double q, double m, double amp_threshold) {
    const GridSpec& g = state.grid;
    const std::size_t n = g.nodes();
    std::vector<double> amp(n), S(n, 0.0);
    std::vector<bool> usable(n, false), unwrapped(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        amp[k] = std::abs(state.psi[k]);
        usable[k] = amp[k] > amp_threshold &&
                    (!state.mask || (*state.mask)(k) != Node::Wall);
    }

    // quality-guided unwrap: grow from the max-amplitude node, always
    // extending through the highest-amplitude frontier node
    std::size_t seed = std::max_element(amp.begin(), amp.end()) - amp.begin();
    using Entry = std::pair<double, std::pair<std::size_t, std::size_t>>; // amp, (node, ref)
    std::priority_queue<Entry> frontier;
    if (usable[seed]) {
        S[seed] = std::arg(state.psi[seed]);
        unwrapped[seed] = true;
        frontier.push({amp[seed], {seed, seed}});
    }
    const auto neighbors = [&](std::size_t k, std::size_t out[4]) {
        const int i = static_cast<int>(k % g.nx), j = static_cast<int>(k / g.nx);
        int cnt = 0;
        if (i + 1 < g.nx) out[cnt++] = k + 1;
        if (i > 0) out[cnt++] = k - 1;
        if (j + 1 < g.ny) out[cnt++] = k + g.nx;
        if (j > 0) out[cnt++] = k - g.nx;
        return cnt;
    };
    while (!frontier.empty()) {
        const auto [node, ref] = frontier.top().second;
        frontier.pop();
        if (node != ref) {
            if (unwrapped[node]) continue;
            const double raw = std::arg(state.psi[node]);
            S[node] = raw + 2.0 * M_PI * std::round((S[ref] - raw) / (2.0 * M_PI));
            unwrapped[node] = true;
        }
        std::size_t nb[4];
        const int cnt = neighbors(node, nb);
        for (int c = 0; c < cnt; ++c)
            if (usable[nb[c]] && !unwrapped[nb[c]]) frontier.push({amp[nb[c]], {nb[c], node}});
    }

    HJResidual res;
    res.r1.assign(n, 0.0);
    res.r2.assign(n, 0.0);
    res.included.assign(n, false);
    const double t = state.time;

    auto kinetic = [&](int i, int j) {
        // grad S - q A at node (i, j), central differences
        const std::size_t k = g.idx(i, j);
        Vec2 p{(S[k + 1] - S[k - 1]) / (2.0 * g.dx), (S[k + g.nx] - S[k - g.nx]) / (2.0 * g.dy)};
        const Vec2 A = field.a(g.x(i), g.y(j), t);
        return Vec2{p.x - q * A.x, p.y - q * A.y};
    };
    auto full_stencil = [&](int i, int j, int r) {
        for (int dj = -r; dj <= r; ++dj)
            for (int di = -r; di <= r; ++di) {
                if (std::abs(di) + std::abs(dj) > r) continue;
                if (i + di < 0 || i + di >= g.nx || j + dj < 0 || j + dj >= g.ny) return false;
                if (!unwrapped[g.idx(i + di, j + dj)]) return false;
            }
        return true;
    };

    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            const std::size_t k = g.idx(i, j);
            if (!unwrapped[k] || !full_stencil(i, j, 2)) {
                ++res.excluded_count;
                continue;
            }
            const Vec2 pk = kinetic(i, j);
            const double lap_a = (amp[k + 1] + amp[k - 1] - 2.0 * amp[k]) / (g.dx * g.dx) +
                                 (amp[k + g.nx] + amp[k - g.nx] - 2.0 * amp[k]) / (g.dy * g.dy);
            const double phi = field.phi(g.x(i), g.y(j), t);
            res.r1[k] = pk.dot(pk) - 2.0 * m * (energy + q * phi) - lap_a / amp[k];
            // r2 = div [ a^2 (grad S - q A) ]
            const Vec2 pxp = kinetic(i + 1, j), pxm = kinetic(i - 1, j);
            const Vec2 pyp = kinetic(i, j + 1), pym = kinetic(i, j - 1);
            const double a2xp = amp[k + 1] * amp[k + 1], a2xm = amp[k - 1] * amp[k - 1];
            const double a2yp = amp[k + g.nx] * amp[k + g.nx], a2ym = amp[k - g.nx] * amp[k - g.nx];
            res.r2[k] = (a2xp * pxp.x - a2xm * pxm.x) / (2.0 * g.dx) +
                        (a2yp * pyp.y - a2ym * pym.y) / (2.0 * g.dy);
            res.included[k] = true;
        }
    return res;
}

} // namespace abwave
