#ifndef GTS_REFERENCE_FRONT_HPP
#define GTS_REFERENCE_FRONT_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gts/problems.hpp"

namespace gts {

/// Points covering the true PF (phi = 1) of one problem at one t.
struct ReferenceFront {
    double t = 0.0;
    std::vector<Vector> points;
    /// PS preimages of `points` (same order). Empty when loaded from the disk cache.
    std::vector<Vector> decisions;
    /// Per-objective (min, max) of `points`.
    std::vector<std::pair<double, double>> bounds;
    /// Set when fewer non-dominated candidates than requested were available.
    bool degenerate = false;

    std::size_t size() const { return points.size(); }
    std::size_t objective_count() const { return points.empty() ? 0 : points[0].size(); }
};

/// 1500 reference points for two objectives, 2500 for three.
std::size_t default_reference_size(std::size_t objective_count);

/// Greedy farthest-point selection of `count` indices, seeded by `seeds` (kept in order).
/// Selection order is deterministic; ties go to the lower index.
std::vector<std::size_t> farthest_point_subsample(const std::vector<Vector>& points,
                                                  std::size_t count,
                                                  const std::vector<std::size_t>& seeds);

/// Candidate PS points used to build a reference front from `n` requested points: 8n
/// positions, on a grid for one position variable, and for two position variables a
/// grid of 4n points together with 4n points of a two-dimensional additive recurrence.
std::vector<Vector> reference_candidates(const Problem& problem, double t, std::size_t n);

/// Samples the PS, evaluates at phi = 1, keeps the non-dominated points and reduces them to
/// n points by farthest-point selection seeded with the per-objective extremes.
ReferenceFront sample_pf(const Problem& problem, double t, std::size_t n);

/// Writes `<stem>.csv` (one row per point) and `<stem>.json` (metadata sidecar).
void write_front_files(const ReferenceFront& front, const Problem& problem,
                       const std::filesystem::path& stem);

/// Reads a front written by write_front_files. Returns nullopt when either file is missing.
std::optional<ReferenceFront> read_front_files(const std::filesystem::path& stem);

/// Thread-safe memoizing provider of reference fronts with an optional on-disk layer.
///
/// Entries are keyed by (problem, t rounded to 12 decimals, n, D). Disk writes go through a
/// temporary file and an atomic rename.
class FrontCache {
public:
    explicit FrontCache(std::optional<std::filesystem::path> directory = std::nullopt);

    /// Honors the GTS_CACHE_DIR environment variable, falling back to `fallback`.
    static std::optional<std::filesystem::path> directory_from_env(
        std::optional<std::filesystem::path> fallback);

    std::shared_ptr<const ReferenceFront> get(const Problem& problem, double t, std::size_t n);

    std::size_t memory_entries() const;

private:
    using Key = std::tuple<int, long long, std::size_t, std::size_t>;

    std::optional<std::filesystem::path> directory_;
    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const ReferenceFront>> entries_;
};

} // namespace gts

#endif
