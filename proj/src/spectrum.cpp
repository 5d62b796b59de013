#include "dirac2d/spectrum.hpp"

#include "dirac2d/error.hpp"
#include "dirac2d/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace dirac2d {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

template <class Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

double safe_det(const std::function<double(double)>& det, double e) {
    try {
        const double d = det(e);
        return std::isfinite(d) ? d : nan;
    } catch (const Error&) {
        return nan;
    }
}

std::vector<double> singular_energies(const std::vector<ShellPotential>& layout, const PhysicalParams& phys) {
    std::vector<double> out;
    for (const auto& sh : layout) {
        out.push_back(phys.m + sh.S + phys.e * sh.V);
    }
    return out;
}

} // namespace

double MatchProblem::determinant() const {
    return matrix.fullPivLu().determinant();
}

AngularMode mode_for(const PotentialConfig& config, const PhysicalParams& phys, int k) {
    if (config.kind == ConfigKind::Config2) {
        return quantize_config2(k, config.w_theta, phys.e);
    }
    return quantize_config1(k);
}

int thread_count(int requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("DIRAC2D_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double energy_scale(const PotentialConfig& config, const PhysicalParams& phys) {
    return std::max({1.0, phys.m, std::abs(phys.e * config.V0), std::abs(config.S0), std::abs(phys.e * config.W0)});
}

MatchProblem build_match(const PotentialConfig& config, const PhysicalParams& phys, const AngularMode& mode,
                         double energy) {
    MatchProblem mp;
    mp.layout = shells(config);
    const RadialCase rc = select_case(config, phys.e);
    for (const auto& sh : mp.layout) {
        mp.params.push_back(effective_params(rc, sh, phys, energy, mode));
        const Character ch = asymptotic_character(mp.params.back());
        if (ch == Character::Threshold) {
            std::ostringstream msg;
            msg << "shell [" << sh.r_lo << ", " << sh.r_hi << ") is at threshold for E = " << energy;
            throw Error(ErrorKind::ThresholdEnergy, msg.str());
        }
    }
    if (asymptotic_character(mp.params.back()) != Character::Decaying) {
        std::ostringstream msg;
        msg << "exterior is propagating at E = " << energy;
        throw Error(ErrorKind::ScatteringOnly, msg.str());
    }
    const std::size_t ns = mp.layout.size();
    for (std::size_t i = 0; i + 1 < ns; ++i) {
        mp.interfaces.push_back(mp.layout[i].r_hi);
    }
    mp.columns.emplace_back(0, Branch::Regular);
    for (std::size_t s = 1; s + 1 < ns; ++s) {
        mp.columns.emplace_back(s, Branch::Regular);
        mp.columns.emplace_back(s, Branch::Irregular);
    }
    mp.columns.emplace_back(ns - 1, Branch::Irregular);

    const std::size_t n = mp.columns.size();
    mp.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    mp.col_scale.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const auto [s, br] = mp.columns[c];
        for (std::size_t i = 0; i < mp.interfaces.size(); ++i) {
            if (i + 1 != s && i != s) {
                continue;
            }
            const SpinorValue v = spinor_basis(mp.params[s], mp.interfaces[i], br);
            const double sign = i == s ? 1.0 : -1.0;
            mp.matrix(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(c)) = sign * v.plus;
            mp.matrix(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(c)) = sign * v.minus;
            mp.col_scale[c] = std::max(mp.col_scale[c], std::hypot(v.plus, v.minus));
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (!(mp.col_scale[c] > 0) || !std::isfinite(mp.col_scale[c])) {
            throw Error(ErrorKind::NonConvergent, "basis solution vanished or overflowed at the interfaces");
        }
        mp.matrix.col(static_cast<Eigen::Index>(c)) /= mp.col_scale[c];
    }
    mp.row_scale.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double s = mp.matrix.row(static_cast<Eigen::Index>(r)).cwiseAbs().maxCoeff();
        mp.row_scale[r] = s;
        if (s > 0) {
            mp.matrix.row(static_cast<Eigen::Index>(r)) /= s;
        }
    }
    return mp;
}

std::vector<double> scan_roots(const PotentialConfig& config, const PhysicalParams& phys, double lo, double hi,
                               const std::function<double(double)>& det, const SpectrumOptions& options) {
    const auto layout = shells(config);
    const double scale = energy_scale(config, phys);
    const double guard = options.guard * scale;

    std::vector<double> cuts{lo, hi};
    for (double b : region_boundaries(config, phys)) {
        cuts.push_back(b);
    }
    for (double s : singular_energies(layout, phys)) {
        cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<double, double>> windows;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(cuts[i], lo) + guard;
        const double b = std::min(cuts[i + 1], hi) - guard;
        if (b > a) {
            windows.emplace_back(a, b);
        }
    }
    double total = 0.0;
    for (auto [a, b] : windows) {
        total += b - a;
    }
    std::vector<std::vector<double>> grids;
    std::vector<std::pair<std::size_t, std::size_t>> index;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const auto [a, b] = windows[w];
        const int pts = std::max(4, static_cast<int>(std::ceil(options.grid_n * (b - a) / total)));
        std::vector<double> g(static_cast<std::size_t>(pts));
        for (int j = 0; j < pts; ++j) {
            g[static_cast<std::size_t>(j)] = a + (b - a) * j / (pts - 1);
        }
        for (std::size_t j = 0; j < g.size(); ++j) {
            index.emplace_back(w, j);
        }
        grids.push_back(std::move(g));
    }
    const int threads = thread_count(options.threads);
    std::vector<double> values(index.size());
    parallel_for(index.size(), threads, [&](std::size_t i) {
        values[i] = safe_det(det, grids[index[i].first][index[i].second]);
    });

    struct Bracket {
        double a, b, da, db;
    };
    std::vector<Bracket> brackets;
    std::size_t k = 0;
    for (const auto& g : grids) {
        double pe = nan, pd = nan;
        for (double e : g) {
            const double d = values[k++];
            if (std::isnan(d)) {
                continue;
            }
            if (!std::isnan(pd) && ((pd < 0) != (d < 0) || d == 0)) {
                brackets.push_back({pe, e, pd, d});
            }
            pe = e;
            pd = d;
        }
    }

    const double tol = 1e-10 * scale;
    std::vector<double> roots(brackets.size(), nan);
    parallel_for(brackets.size(), threads, [&](std::size_t i) {
        Bracket br = brackets[i];
        const double start = std::max(std::abs(br.da), std::abs(br.db));
        if (br.db == 0) {
            roots[i] = br.b;
            return;
        }
        while (br.b - br.a > tol) {
            const double mid = 0.5 * (br.a + br.b);
            const double dm = safe_det(det, mid);
            if (std::isnan(dm)) {
                return;
            }
            if (dm == 0) {
                br.a = br.b = mid;
                break;
            }
            if ((dm < 0) == (br.da < 0)) {
                br.a = mid;
                br.da = dm;
            } else {
                br.b = mid;
                br.db = dm;
            }
        }
        // A pole flips sign too, but its magnitude grows under refinement.
        if (std::max(std::abs(br.da), std::abs(br.db)) > 1e-3 * start) {
            return;
        }
        roots[i] = 0.5 * (br.a + br.b);
    });
    std::vector<double> out;
    for (double r : roots) {
        if (!std::isnan(r)) {
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<std::array<double, 2>> null_coefficients(const MatchProblem& mp) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mp.matrix, Eigen::ComputeFullV);
    const Eigen::VectorXd x = svd.matrixV().col(mp.matrix.cols() - 1);
    std::vector<std::array<double, 2>> coef(mp.layout.size(), {0.0, 0.0});
    for (std::size_t c = 0; c < mp.columns.size(); ++c) {
        const auto [s, br] = mp.columns[c];
        coef[s][br == Branch::Regular ? 0 : 1] = x(static_cast<Eigen::Index>(c)) / mp.col_scale[c];
    }
    return coef;
}

double exterior_end(const BoundState& st, double c) {
    return c + 60.0 / std::sqrt(st.phys.m * st.phys.m - st.energy * st.energy);
}

// Gauss-Kronrod per shell. The exterior is cut into pieces of a few decay lengths
// so that the adaptive rule never has to resolve the whole tail at once.
template <class F>
double shell_integral(const BoundState& st, const ShellPotential& sh, F f) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (std::isfinite(sh.r_hi)) {
        return GK::integrate(f, sh.r_lo, sh.r_hi, 10, 1e-11);
    }
    const double end = exterior_end(st, sh.r_lo);
    const double piece = (end - sh.r_lo) / 15.0;
    double total = 0.0;
    for (int i = 0; i < 15; ++i) {
        total += GK::integrate(f, sh.r_lo + i * piece, sh.r_lo + (i + 1) * piece, 10, 1e-11);
    }
    return total;
}

double integrate_density(const BoundState& st) {
    double total = 0.0;
    for (const auto& sh : shells(st.config)) {
        total += shell_integral(st, sh, [&](double r) {
            const SpinorValue v = evaluate(st, r);
            return v.plus * v.plus + v.minus * v.minus;
        });
    }
    return total;
}

} // namespace

SpinorValue evaluate(const BoundState& state, double r) {
    if (!(r > 0)) {
        throw Error(ErrorKind::InvalidConfig, "bound states are evaluated at r > 0");
    }
    const auto layout = shells(state.config);
    const std::size_t s = shell_index(layout, r);
    const RadialParams p = effective_params(select_case(state.config, state.phys.e), layout[s], state.phys,
                                            state.energy, state.mode);
    SpinorValue out;
    for (int b = 0; b < 2; ++b) {
        const double c = state.coefficients[s][static_cast<std::size_t>(b)];
        if (c == 0.0) {
            continue;
        }
        const SpinorValue v = spinor_basis(p, r, b == 0 ? Branch::Regular : Branch::Irregular);
        out.plus += c * v.plus;
        out.minus += c * v.minus;
        out.dplus += c * v.dplus;
        out.dminus += c * v.dminus;
    }
    return out;
}

std::vector<BoundState> find_bound_states(const PotentialConfig& config, const PhysicalParams& phys,
                                          const AngularMode& mode, double lo, double hi,
                                          const SpectrumOptions& options) {
    phys.validate();
    config.validate();
    if (config.kind == ConfigKind::CoulombMagnetic) {
        throw Error(ErrorKind::InvalidConfig, "bound states are only searched for the dot configurations");
    }
    if ((config.kind == ConfigKind::Config2) != (mode.family == ModeFamily::Config2)) {
        throw Error(ErrorKind::InvalidMode, "angular mode does not belong to this configuration");
    }
    if (!(lo < hi) || lo < -phys.m || hi > phys.m) {
        std::ostringstream msg;
        msg << "window [" << lo << ", " << hi << "] must lie inside the decaying-exterior region (-" << phys.m << ", "
            << phys.m << ")";
        throw Error(ErrorKind::WindowOutsideRegion, msg.str());
    }
    auto det = [&](double e) { return build_match(config, phys, mode, e).determinant(); };
    const std::vector<double> roots = scan_roots(config, phys, lo, hi, det, options);

    std::vector<BoundState> states(roots.size());
    std::vector<char> keep(roots.size(), 1);
    parallel_for(roots.size(), thread_count(options.threads), [&](std::size_t i) {
        BoundState& st = states[i];
        st.energy = roots[i];
        st.config = config;
        st.phys = phys;
        st.mode = mode;
        try {
            const MatchProblem mp = build_match(config, phys, mode, st.energy);
            st.residual = mp.determinant();
            st.coefficients = null_coefficients(mp);
            const double n0 = integrate_density(st);
            const double f = 1.0 / std::sqrt(n0);
            for (auto& c : st.coefficients) {
                c[0] *= f;
                c[1] *= f;
            }
            st.norm = integrate_density(st);
        } catch (const Error&) {
            keep[i] = 0;
            return;
        }
        try {
            st.region = classify(config, phys, st.energy);
        } catch (const Error& ex) {
            st.region_note = ex.what();
        }
        if (options.confirm_with_oracle) {
            try {
                const double d1 = oracle::shooting_determinant(config, phys, mode, st.energy - 1e-6);
                const double d2 = oracle::shooting_determinant(config, phys, mode, st.energy + 1e-6);
                st.oracle_confirmed = (d1 < 0) != (d2 < 0);
            } catch (const Error&) {
                st.oracle_confirmed = false;
            }
        }
    });
    std::vector<BoundState> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (keep[i]) {
            out.push_back(std::move(states[i]));
        }
    }
    return out;
}

std::vector<FieldSample> wavefunction(const BoundState& state, const std::vector<double>& r_grid,
                                      const std::vector<double>& theta_grid) {
    std::vector<FieldSample> out;
    out.reserve(r_grid.size() * theta_grid.size());
    const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (double r : r_grid) {
        if (!(r > 0)) {
            throw Error(ErrorKind::InvalidConfig, "wavefunction grids must exclude r = 0");
        }
        const SpinorValue v = evaluate(state, r);
        const double radial = inv / std::sqrt(r);
        for (double th : theta_grid) {
            const std::complex<double> F = angular_factor(state.mode, th);
            const std::complex<double> up = F * std::polar(1.0, -0.5 * th);
            const std::complex<double> dn = F * std::polar(1.0, 0.5 * th);
            out.push_back({r, th, up * (radial * v.plus), dn * (radial * v.minus)});
        }
    }
    return out;
}

MeasureCheck measure_identity(const BoundState& state, int n_theta) {
    const auto layout = shells(state.config);
    const double two_pi = 2.0 * std::numbers::pi;
    const double h = two_pi / n_theta;
    std::vector<double> thetas(static_cast<std::size_t>(n_theta));
    for (int j = 0; j < n_theta; ++j) {
        thetas[static_cast<std::size_t>(j)] = h * j;
    }
    const double inv = 1.0 / std::sqrt(two_pi);
    MeasureCheck mc;
    for (const auto& sh : layout) {
        // |Psi|^2 r through the reconstructed field, periodic trapezoid in theta
        auto psi = [&](double r) {
            const auto f = wavefunction(state, {r}, thetas);
            double acc = 0.0;
            for (const auto& s : f) {
                acc += std::norm(s.psi_plus) + std::norm(s.psi_minus);
            }
            return acc * h * r;
        };
        // |chi|^2 straight from the radial spinor and the angular factor
        auto chi = [&](double r) {
            const SpinorValue v = evaluate(state, r);
            double acc = 0.0;
            for (double th : thetas) {
                const std::complex<double> F = angular_factor(state.mode, th);
                acc += std::norm(F * std::polar(1.0, -0.5 * th) * (inv * v.plus))
                       + std::norm(F * std::polar(1.0, 0.5 * th) * (inv * v.minus));
            }
            return acc * h;
        };
        mc.psi_measure += shell_integral(state, sh, psi);
        mc.chi_measure += shell_integral(state, sh, chi);
    }
    return mc;
}

CoulombReport coulomb_analyze(const PhysicalParams& phys, const AngularMode& mode) {
    CoulombReport rep;
    rep.eps_theta = mode.eps_theta;
    rep.Ze = phys.Z * phys.e;
    rep.lambda_coeff = mode.eps_theta * mode.eps_theta - rep.Ze * rep.Ze;
    rep.supercritical = rep.lambda_coeff < -0.25;
    rep.critical_coupling = std::sqrt(mode.eps_theta * mode.eps_theta + 0.25);
    rep.notes.push_back("lambda is the inverse-square coefficient itself; supercritical when lambda < -1/4");
    rep.notes.push_back("the uniform field B has a vector potential that vanishes as r -> 0, so it does not enter");
    std::ostringstream os;
    os << "quoted critical charge K_c = 1/2 for eps_theta = 1/2 disagrees with (Ze)_crit = sqrt(eps_theta^2 + 1/4) = "
       << std::sqrt(0.5) << "; both are reported";
    rep.notes.push_back(os.str());
    return rep;
}

} // namespace dirac2d
