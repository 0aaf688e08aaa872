#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meroconv/family.hpp"
#include "meroconv/geometry.hpp"

namespace mero {

struct ClassifyConfig {
    double rep_tol = 1e-8;         // absolute Cauchy tolerance (exact families hit 0)
    double rep_decay = 0.05;       // tail/head decay declaring a Cauchy trend
    double mass_trend_rel = 0.05;  // 5% tail variation for mass convergence
    double cluster_sep = 0.05;     // FS separation for bubble clusters
    std::uint64_t seed = 20240901;
    int workers = 2;
    int random_hyperplanes = 3;

    int chart = 0;
    ChartDomain domain;                 // chart polydisk; also the metric weights
    std::vector<SliceSpec> slices;      // defaults derived from the domain when empty

    // mass stage
    bool run_masses = true;
    bool mass_domain_is_ball = false;   // ball for n = 3
    double ball_radius = 0.5;
    std::int64_t mc_samples = 300000;
    std::vector<double> rash_importance_scales;  // optional importance hints (C^3)
    std::vector<std::vector<std::complex<double>>> importance_centers;
};

// ---------------------------------------------------------------------------
// rep_limit
// ---------------------------------------------------------------------------

struct RepLimitResult {
    std::vector<int> ks;
    std::vector<double> metric_series;        // consecutive normalized-rep distances
    std::vector<double> candidate_distance;   // distance to the supplied candidate
    bool cauchy = false;
    bool candidate_emitted = false;
    std::optional<PolyTuple> limit_tuple;     // exact chart tuple (not reduced)
    std::string note;
};

RepLimitResult rep_limit(const MapFamily& fam, const ClassifyConfig& cfg);

// ---------------------------------------------------------------------------
// reducedness of the limit
// ---------------------------------------------------------------------------

struct ReducednessReport {
    bool reduced = false;
    SparsePoly common_divisor;  // trivial when reduced
};

ReducednessReport reducedness_of_limit(const PolyTuple& t);

// ---------------------------------------------------------------------------
// divisor_count_bound
// ---------------------------------------------------------------------------

struct Hyperplane {
    std::string name;
    std::vector<GaussianRational> coeffs;  // length N+1
};

struct HyperplaneCountEvidence {
    Hyperplane hyperplane;
    bool skipped = false;
    std::string skip_reason;
    std::vector<int> ks;
    std::vector<long> counts;  // sum over the slice panel, per k
    bool bounded = true;
    std::vector<std::string> notes;
};

/// Per-k argument-principle counts of H(f_k) on the slice panel. When a
/// limit tuple is supplied and H vanishes identically on it, the hyperplane
/// is skipped with a record (the definition requires f(U) not inside H).
HyperplaneCountEvidence divisor_count_bound(const MapFamily& fam, const Hyperplane& H,
                                            const std::vector<SliceSpec>& slices,
                                            const ClassifyConfig& cfg,
                                            const std::optional<PolyTuple>& limit_for_skip);

// ---------------------------------------------------------------------------
// mass_convergence
// ---------------------------------------------------------------------------

struct MassSeriesEvidence {
    int order = 0;
    std::vector<int> ks;
    std::vector<double> masses;
    std::vector<double> errors;
    std::string trend;  // "converging" | "diverging" | "inconclusive"
    double reference = 0.0;  // limit map's own mass when available
    bool has_reference = false;
};

std::vector<MassSeriesEvidence> mass_convergence(const MapFamily& fam, const ClassifyConfig& cfg,
                                                 const std::optional<PolyTuple>& limit_tuple);

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

enum class Level { Strong, Weak, Gamma, Divergent, Inconclusive };
std::string level_name(Level l);

struct Verdict {
    Level level = Level::Inconclusive;
    RepLimitResult rep;
    ReducednessReport limit_reducedness;
    bool limit_reducedness_known = false;
    std::vector<HyperplaneCountEvidence> divisor_counts;
    std::vector<MassSeriesEvidence> mass_series;
    std::vector<double> slice_area_series;  // sup over slice panel per k (area bound diagnostic)
    std::string narrative;
};

Verdict classify(const MapFamily& fam, const ClassifyConfig& cfg);

// ---------------------------------------------------------------------------
// uniform separation & bubbles
// ---------------------------------------------------------------------------

struct SeparationReport {
    std::vector<int> ks;
    std::vector<double> hausdorff;  // +inf for an empty pullback
    double infimum = 0.0;
    int slice_count = 0;
    std::string note;
};

SeparationReport uniform_separation(const MapFamily& fam, const Hyperplane& H0, const Hyperplane& H1,
                                    const ClassifyConfig& cfg);

struct BubbleCluster {
    std::vector<std::complex<double>> representative;  // normalized homogeneous coordinates
    int hits = 0;
    double min_dist_to_limit_cloud = 0.0;
};

struct BubbleReport {
    std::vector<std::complex<double>> base_point;  // chart coordinates
    std::vector<double> radii;
    std::vector<int> ks;
    std::vector<BubbleCluster> clusters;
    bool nonempty = false;
    bool inconclusive = false;
    std::string note;
};

BubbleReport bubble_probe(const MapFamily& fam, const std::vector<std::complex<double>>& a,
                          const std::vector<double>& radii, const ClassifyConfig& cfg);

/// Fubini-Study chordal distance between projective points given by
/// homogeneous coordinate vectors.
double fs_distance(const std::vector<std::complex<double>>& a,
                   const std::vector<std::complex<double>>& b);

}  // namespace mero
