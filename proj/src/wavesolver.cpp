#include "abwave/wavesolver.hpp"

#include "abwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace abwave {

void GridSpec::validate() const {
    if (nx < 16 || ny < 16) throw ConfigError("grid: nx, ny must be >= 16");
    if (dx <= 0.0 || dy <= 0.0 || dt <= 0.0) throw ConfigError("grid: dx, dy, dt must be > 0");
}

double WaveField::norm2() const {
    double s = 0.0;
    for (const auto& c : psi) s += std::norm(c);
    return s * grid.dx * grid.dy;
}

LinkPhases LinkPhases::build(const GridSpec& grid, const PotentialField& field, double q,
                             double time) {
    LinkPhases l;
    l.theta_x.resize(static_cast<std::size_t>(grid.nx - 1) * grid.ny);
    l.theta_y.resize(static_cast<std::size_t>(grid.nx) * (grid.ny - 1));
    l.qphi_dt.resize(grid.nodes());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i + 1 < grid.nx; ++i) {
            const Vec2 p0{grid.x(i), grid.y(j)}, p1{grid.x(i + 1), grid.y(j)};
            l.theta_x[static_cast<std::size_t>(j) * (grid.nx - 1) + i] =
                q * edge_line_integral(field, p0, p1, time);
        }
    for (int j = 0; j + 1 < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const Vec2 p0{grid.x(i), grid.y(j)}, p1{grid.x(i), grid.y(j + 1)};
            l.theta_y[grid.idx(i, j)] = q * edge_line_integral(field, p0, p1, time);
        }
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            l.qphi_dt[grid.idx(i, j)] = q * field.phi(grid.x(i), grid.y(j), time) * grid.dt;
    return l;
}

LinkPhases LinkPhases::free_space(const GridSpec& grid) {
    LinkPhases l;
    l.theta_x.assign(static_cast<std::size_t>(grid.nx - 1) * grid.ny, 0.0);
    l.theta_y.assign(static_cast<std::size_t>(grid.nx) * (grid.ny - 1), 0.0);
    l.qphi_dt.assign(grid.nodes(), 0.0);
    return l;
}

double LinkPhases::plaquette_sum(const GridSpec& grid, int i, int j) const {
    const auto tx = [&](int ii, int jj) {
        return theta_x[static_cast<std::size_t>(jj) * (grid.nx - 1) + ii];
    };
    const auto ty = [&](int ii, int jj) { return theta_y[grid.idx(ii, jj)]; };
    return tx(i, j) + ty(i + 1, j) - tx(i, j + 1) - ty(i, j);
}

WaveField init_packet(const GridSpec& grid, std::shared_ptr<const Mask> mask, const Vec2& center,
                      double sigma, const Vec2& k0, double sigma_y,
                      const PotentialField* field, double q) {
    grid.validate();
    if (sigma <= 0.0) throw ConfigError("init_packet: sigma must be > 0");
    if (sigma_y <= 0.0) sigma_y = sigma;
    WaveField w;
    w.grid = grid;
    w.mask = mask ? std::move(mask) : std::make_shared<const Mask>(Mask::interior(grid));
    w.psi.resize(grid.nodes());
    w.time = 0.0;

    double total = 0.0, wall_mass = 0.0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            const double ex = (x - center.x) / sigma;
            const double ey = (y - center.y) / sigma_y;
            const double amp = std::exp(-(ex * ex + ey * ey) / 4.0);
            double phase = k0.x * x + k0.y * y;
            if (field && q != 0.0)
                phase += q * edge_line_integral(*field, center, {x, y}, 0.0);
            const std::size_t n = grid.idx(i, j);
            w.psi[n] = std::polar(amp, phase);
            total += amp * amp;
            if ((*w.mask)(n) == Node::Wall) wall_mass += amp * amp;
        }
    if (wall_mass > 1e-7 * total)
        throw ConfigError("init_packet: packet overlaps wall nodes beyond 1e-7 mass");
    for (std::size_t n = 0; n < w.psi.size(); ++n)
        if ((*w.mask)(n) == Node::Wall) w.psi[n] = 0.0;
    const double scale = 1.0 / std::sqrt(w.norm2());
    for (auto& c : w.psi) c *= scale;
    return w;
}

void gauge_rotate(WaveField& state, const GaugeFunction& g, double q) {
    const GridSpec& gr = state.grid;
    for (int j = 0; j < gr.ny; ++j)
        for (int i = 0; i < gr.nx; ++i)
            state.psi[gr.idx(i, j)] *=
                std::polar(1.0, q * g(gr.x(i), gr.y(j), state.time));
}

CurrentField probability_current(const WaveField& state, const LinkPhases& links, double m) {
    const GridSpec& g = state.grid;
    CurrentField c;
    c.jx.resize(links.theta_x.size());
    c.jy.resize(links.theta_y.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
            const std::size_t e = static_cast<std::size_t>(j) * (g.nx - 1) + i;
            const Complex hop = std::conj(state.psi[g.idx(i, j)]) *
                                std::polar(1.0, -links.theta_x[e]) * state.psi[g.idx(i + 1, j)];
            c.jx[e] = hop.imag() / (m * g.dx);
        }
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t e = g.idx(i, j);
            const Complex hop = std::conj(state.psi[e]) *
                                std::polar(1.0, -links.theta_y[e]) * state.psi[g.idx(i, j + 1)];
            c.jy[e] = hop.imag() / (m * g.dy);
        }
    return c;
}

Propagator::Propagator(const GridSpec& grid, std::shared_ptr<const Mask> mask,
                       const LinkPhases& links, double q, double m, double absorber_strength)
    : grid_(grid), mask_(std::move(mask)), links_(links), q_(q), m_(m) {
    grid_.validate();
    if (!mask_) mask_ = std::make_shared<const Mask>(Mask::interior(grid_));
    build_lines();

    // absorber ramp: sin^2 in the fractional depth through the local
    // absorbing strip (depth counted from the nearest interior node,
    // strip thickness inferred from the distance to the grid edge), so
    // strips of different depth each ramp smoothly to full strength
    damp_.assign(grid_.nodes(), 1.0);
    std::vector<int> depth(grid_.nodes(), -1);
    std::deque<std::size_t> queue;
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            const std::size_t n = grid_.idx(i, j);
            if ((*mask_)(n) == Node::Interior) {
                depth[n] = 0;
                queue.push_back(n);
            }
        }
    while (!queue.empty()) {
        const std::size_t n = queue.front();
        queue.pop_front();
        const int i = static_cast<int>(n % grid_.nx), j = static_cast<int>(n / grid_.nx);
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int ii = i + di[k], jj = j + dj[k];
            if (ii < 0 || ii >= grid_.nx || jj < 0 || jj >= grid_.ny) continue;
            const std::size_t nn = grid_.idx(ii, jj);
            if (depth[nn] < 0 && (*mask_)(nn) == Node::Absorber) {
                depth[nn] = depth[n] + 1;
                queue.push_back(nn);
            }
        }
    }
    for (std::size_t n = 0; n < grid_.nodes(); ++n) {
        if ((*mask_)(n) == Node::Wall) {
            damp_[n] = 0.0;
        } else if ((*mask_)(n) == Node::Absorber) {
            const int i = static_cast<int>(n % grid_.nx), j = static_cast<int>(n / grid_.nx);
            const int edge = std::min(std::min(i, grid_.nx - 1 - i), std::min(j, grid_.ny - 1 - j));
            const int thickness = std::max(1, depth[n] + edge);
            const double xi = std::min(1.0, std::max(depth[n], 1) / double(thickness));
            const double ramp = std::sin(0.5 * M_PI * xi);
            damp_[n] = std::exp(-absorber_strength * grid_.dt * ramp * ramp);
        }
    }
}

void Propagator::build_lines() {
    const double a = 0.5 * grid_.dt;
    const Complex ia{0.0, a};
    const double ax = 1.0 / (2.0 * m_ * grid_.dx * grid_.dx);
    const double ay = 1.0 / (2.0 * m_ * grid_.dy * grid_.dy);

    auto make_line = [&](int len, auto node_at, auto theta_at, double alpha) {
        LineSystem s;
        s.a_sub.assign(len, 0.0);
        s.a_sup.assign(len, 0.0);
        s.c_sub.assign(len, 0.0);
        s.c_diag.assign(len, 0.0);
        s.c_sup.assign(len, 0.0);
        s.w.assign(len, 0.0);
        s.inv_bp.assign(len, 0.0);
        std::vector<Complex> a_diag(len);
        for (int k = 0; k < len; ++k) {
            const std::size_t n = node_at(k);
            const bool wall = (*mask_)(n) == Node::Wall;
            // potential energy -q Phi, split half per direction
            const double v = -links_.qphi_dt[n] / grid_.dt;
            const Complex hd = wall ? Complex{0.0, 0.0} : Complex{2.0 * alpha + 0.5 * v, 0.0};
            a_diag[k] = 1.0 + ia * hd;
            s.c_diag[k] = 1.0 - ia * hd;
            if (k + 1 < len) {
                const bool cut = wall || (*mask_)(node_at(k + 1)) == Node::Wall;
                if (!cut) {
                    const Complex hop = std::polar(-alpha, -theta_at(k)); // -alpha e^{-i theta}
                    s.a_sup[k] = ia * hop;
                    s.c_sup[k] = -ia * hop;
                    const Complex hop_dag = std::conj(hop);
                    s.a_sub[k + 1] = ia * hop_dag;
                    s.c_sub[k + 1] = -ia * hop_dag;
                }
            }
        }
        // Thomas forward elimination (matrix is static per run)
        Complex bp = a_diag[0];
        s.inv_bp[0] = 1.0 / bp;
        for (int k = 1; k < len; ++k) {
            s.w[k] = s.a_sub[k] * s.inv_bp[k - 1];
            bp = a_diag[k] - s.w[k] * s.a_sup[k - 1];
            s.inv_bp[k] = 1.0 / bp;
        }
        return s;
    };

    rows_.clear();
    rows_.reserve(grid_.ny);
    for (int j = 0; j < grid_.ny; ++j) {
        rows_.push_back(make_line(
            grid_.nx, [&](int i) { return grid_.idx(i, j); },
            [&](int i) { return links_.theta_x[static_cast<std::size_t>(j) * (grid_.nx - 1) + i]; },
            ax));
    }
    cols_.clear();
    cols_.reserve(grid_.nx);
    for (int i = 0; i < grid_.nx; ++i) {
        cols_.push_back(make_line(
            grid_.ny, [&](int j) { return grid_.idx(i, j); },
            [&](int j) { return links_.theta_y[grid_.idx(i, j)]; }, ay));
    }
}

void Propagator::sweep(std::vector<Complex>& psi, const std::vector<LineSystem>& lines,
                       bool x_dir) const {
    const int nlines = static_cast<int>(lines.size());
    const int len = x_dir ? grid_.nx : grid_.ny;
    const std::size_t stride = x_dir ? 1 : static_cast<std::size_t>(grid_.nx);
#pragma omp parallel
    {
        std::vector<Complex> d(len);
#pragma omp for schedule(static)
        for (int l = 0; l < nlines; ++l) {
            const LineSystem& s = lines[l];
            const std::size_t base = x_dir ? static_cast<std::size_t>(l) * grid_.nx
                                           : static_cast<std::size_t>(l);
            // rhs = C psi, with forward elimination fused
            Complex prev{};
            for (int k = 0; k < len; ++k) {
                Complex rhs = s.c_diag[k] * psi[base + k * stride];
                if (k > 0) rhs += s.c_sub[k] * psi[base + (k - 1) * stride];
                if (k + 1 < len) rhs += s.c_sup[k] * psi[base + (k + 1) * stride];
                prev = (k == 0) ? rhs : rhs - s.w[k] * prev;
                d[k] = prev;
            }
            // back substitution
            Complex next = d[len - 1] * s.inv_bp[len - 1];
            psi[base + (len - 1) * stride] = next;
            for (int k = len - 2; k >= 0; --k) {
                next = (d[k] - s.a_sup[k] * next) * s.inv_bp[k];
                psi[base + k * stride] = next;
            }
        }
    }
}

void Propagator::step(WaveField& state) const {
    sweep(state.psi, rows_, true);
    sweep(state.psi, cols_, false);
    double probe = 0.0;
    for (std::size_t n = 0; n < state.psi.size(); ++n) {
        state.psi[n] *= damp_[n];
        probe += std::norm(state.psi[n]);
    }
    if (!std::isfinite(probe))
        throw NumericalError("propagation instability: non-finite amplitude at t = " +
                             std::to_string(state.time));
    state.time += grid_.dt;
}

void Propagator::run(WaveField& state, int steps) const {
    for (int s = 0; s < steps; ++s) step(state);
}

} // namespace abwave
