#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meroconv/classify.hpp"
#include "meroconv/family.hpp"
#include "meroconv/proj_map.hpp"

namespace mero {

/// Log-modulus of one coordinate, with exact minus-infinity for coordinates
/// that are exactly zero (points on coordinate axes).
struct ExtLog {
    bool neg_inf = false;
    BigRat value = 0;

    static ExtLog minus_infinity() { return ExtLog{true, 0}; }
    static ExtLog of(const BigRat& v) { return ExtLog{false, v}; }
};

struct OrbitRecord {
    std::vector<std::vector<std::complex<double>>> iterates;  // max-modulus-1 homogeneous coords
    int limit_index = -1;          // dominant homogeneous coordinate, -1 when none
    bool julia_tie = false;        // exact tie of the leading forms
    std::string margin;            // exact dominance margin (rational) for the log path
    double margin_value = 0.0;
    int indeterminacy_step = -1;   // numeric path: step where all components vanished
    bool limit_cauchy = false;     // numeric path: FS-Cauchy tail detected
    std::vector<std::complex<double>> limit_point;
};

/// Exact orbit of a monomial self-map in log coordinates: the exponent
/// matrix power applied to the log-moduli vector, with the limit coordinate
/// decided by exact comparison of the homogeneous log-modulus forms.
OrbitRecord log_orbit(const MonomialMap& m, const std::vector<ExtLog>& chart_log_moduli,
                      const BigInt& k);

struct NumericOrbitConfig {
    int k_max = 40;
    double fs_tol = 1e-4;
    int tail_window = 5;
    double indeterminacy_tol = 1e-12;
};

/// Renormalized pointwise iteration with an FS-distance Cauchy test on the
/// tail of the orbit.
OrbitRecord numeric_orbit(const HomogRep& f, const std::vector<std::complex<double>>& homog_point,
                          const NumericOrbitConfig& cfg = {});

struct FatouScanSpec {
    int chart = 0;
    double m1_min = 0.0, m1_max = 2.0;  // modulus range of the first chart coordinate
    double m2_min = 0.0, m2_max = 1.2;
    int n1 = 200, n2 = 200;
    bool cell_centers = true;  // sample cell centers; otherwise inclusive endpoints
    double margin_indeterminate = 0.02;
    int k = 40;
    double perturb = 1e-3;  // relative moduli perturbation for the equicontinuity proxy
};

struct FatouCell {
    double m1 = 0.0, m2 = 0.0;
    std::string label;  // Phi1_to_r | Phi2_to_q | DeltaStar_to_p | Julia | Indeterminate
    double margin = 0.0;
};

struct FatouScanGrid {
    FatouScanSpec spec;
    std::vector<FatouCell> cells;
    std::string csv() const;  // cell center, label, margin
};

FatouScanGrid fatou_scan(const HomogRep& f, const FatouScanSpec& spec);

struct GammaVolumeSeries {
    std::vector<int> ks;
    double eps = 0.5;
    std::vector<double> first_integral;   // (f^k)* omega ^ omega_e over the eps-bidisk
    std::vector<double> second_integral;  // (f^k)* omega^2
    std::vector<double> second_bound;     // dominating closed bound 2^{2k+2} eps^{2^{k+1}-2}/(2^{k+1}-2)
    std::vector<int> cross_ks;            // ks cross-checked by general quadrature
    std::vector<double> first_general;
    std::vector<double> second_general;
    std::string method = "radial-closed-form";
};

/// The two graph-volume integrals of the degree-2 map's iterates over the
/// eps-bidisk around the indeterminacy point, by 1-d radial quadrature of the
/// explicit integrands, optionally cross-checked by the general 2-d engine.
GammaVolumeSeries gamma_volume_series(int k_min, int k_max, double eps, bool cross_check = true);

struct FatouMembership {
    std::vector<std::complex<double>> point;  // chart coordinates
    bool in_phi = false;        // equicontinuity sense, off the preimage closure of I_f
    bool in_phi_s = false;
    bool in_phi_w = false;
    bool in_phi_gamma = false;
    bool on_indeterminacy_closure = false;
    Level classify_level = Level::Inconclusive;
    std::string note;
};

struct FatouInclusionConfig {
    int chart = 0;
    int k_min = 2, k_max = 9;
    double neighborhood = 0.04;
    NumericOrbitConfig orbit;
    std::uint64_t seed = 20240901;
};

/// Per-point membership in the equicontinuity / strong / weak / Gamma Fatou
/// sets, certified on samples via orbits and local classification.
std::vector<FatouMembership> fatou_inclusion_report(
    const HomogRep& f, const std::vector<std::vector<std::complex<double>>>& chart_points,
    const FatouInclusionConfig& cfg = {});

}  // namespace mero
