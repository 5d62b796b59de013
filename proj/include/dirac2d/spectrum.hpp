#pragma once

#include "dirac2d/angular.hpp"
#include "dirac2d/model.hpp"
#include "dirac2d/radial.hpp"
#include "dirac2d/regions.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dirac2d {

/// Continuity of (Phi+, Phi-) at every interface. Columns are the closed-form basis
/// solutions: Regular on the innermost shell, Regular and Irregular on middle
/// shells, Irregular (decaying) outside.
struct MatchProblem {
    std::vector<ShellPotential> layout;
    std::vector<RadialParams> params;
    std::vector<double> interfaces;
    Eigen::MatrixXd matrix;        ///< rows and columns scaled to unit max-norm
    std::vector<double> col_scale; ///< divisor applied to each column
    std::vector<double> row_scale; ///< divisor applied to each row

    /// (shell, branch) of each column
    std::vector<std::pair<std::size_t, Branch>> columns;

    double determinant() const;
};

/// Mode for a configuration: quantize_config1(k) or quantize_config2(k, W(theta), e).
AngularMode mode_for(const PotentialConfig& config, const PhysicalParams& phys, int k);

/// Throws ScatteringOnly (exterior not decaying), ThresholdEnergy or SingularEnergy.
MatchProblem build_match(const PotentialConfig& config, const PhysicalParams& phys, const AngularMode& mode,
                         double energy);

struct SpectrumOptions {
    int grid_n = 400;
    /// Require a sign change of the shooting determinant at E +- 1e-6 for each root.
    bool confirm_with_oracle = true;
    /// 0 means DIRAC2D_THREADS, or all hardware threads when unset.
    int threads = 0;
    /// Guard band (relative to the energy scale) kept clear of region boundaries and
    /// singular energies when the window is split.
    double guard = 1e-8;
};

struct BoundState {
    double energy = 0.0;
    PotentialConfig config;
    PhysicalParams phys;
    AngularMode mode;
    /// Coefficients of the (Regular, Irregular) basis per shell, normalized state.
    std::vector<std::array<double, 2>> coefficients;
    /// Integral of Phi+^2 + Phi-^2 over r for the stored coefficients.
    double norm = 0.0;
    std::optional<RegionLabel> region;
    std::string region_note;
    bool oracle_confirmed = false;
    /// Normalized matching determinant at the reported energy.
    double residual = 0.0;
};

int thread_count(int requested);

/// Energy scale used for bisection and guard bands: max(1, m, |eV0|, |S0|, |eW0|).
double energy_scale(const PotentialConfig& config, const PhysicalParams& phys);

/// Roots of the matching determinant in [lo, hi], sorted by energy. The window must
/// lie inside (-m, m) (decaying exterior), else WindowOutsideRegion.
std::vector<BoundState> find_bound_states(const PotentialConfig& config, const PhysicalParams& phys,
                                          const AngularMode& mode, double lo, double hi,
                                          const SpectrumOptions& options = {});

/// Sign changes of an arbitrary determinant on the same split grid; shared by the
/// matching and shooting scans so that both see identical brackets.
std::vector<double> scan_roots(const PotentialConfig& config, const PhysicalParams& phys, double lo, double hi,
                               const std::function<double(double)>& det, const SpectrumOptions& options);

/// (Phi+, Phi-) and derivatives of a bound state at r > 0.
SpinorValue evaluate(const BoundState& state, double r);

struct FieldSample {
    double r = 0.0;
    double theta = 0.0;
    std::complex<double> psi_plus;
    std::complex<double> psi_minus;
};

/// Psi(r, theta) = F(theta) exp(-i sigma_3 theta / 2) (Phi+, Phi-) / sqrt(2 pi r),
/// normalized so that the integral of |Psi|^2 r dr dtheta is one. r = 0 is rejected.
std::vector<FieldSample> wavefunction(const BoundState& state, const std::vector<double>& r_grid,
                                      const std::vector<double>& theta_grid);

struct MeasureCheck {
    double psi_measure = 0.0; ///< integral of |Psi|^2 r dr dtheta
    double chi_measure = 0.0; ///< integral of |chi+|^2 + |chi-|^2 dr dtheta
};

MeasureCheck measure_identity(const BoundState& state, int n_theta = 64);

struct CoulombReport {
    double eps_theta = 0.0;
    double Ze = 0.0;
    /// Coefficient of the small-r inverse-square term, eps_theta^2 - (Ze)^2.
    double lambda_coeff = 0.0;
    bool supercritical = false;
    /// (Ze)_crit = sqrt(eps_theta^2 + 1/4).
    double critical_coupling = 0.0;
    /// Critical charge quoted elsewhere for eps_theta = 1/2; kept next to ours, unreconciled.
    double quoted_critical_charge = 0.5;
    bool depends_on_B = false;
    std::vector<std::string> notes;
};

CoulombReport coulomb_analyze(const PhysicalParams& phys, const AngularMode& mode);

} // namespace dirac2d
