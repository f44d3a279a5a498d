#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "gts/reference_front.hpp"

using namespace gts;

namespace {

double distance(const Vector& a, const Vector& b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        s += (a[j] - b[j]) * (a[j] - b[j]);
    }
    return std::sqrt(s);
}

std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("gts_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("farthest-point selection on a line")
{
    std::vector<Vector> pts;
    for (int i = 0; i <= 8; ++i) {
        pts.push_back({static_cast<double>(i)});
    }
    const auto sel = farthest_point_subsample(pts, 3, {0});
    CHECK(sel == std::vector<std::size_t>{0, 8, 4});
    CHECK(farthest_point_subsample(pts, 5, {0, 8}) == std::vector<std::size_t>{0, 8, 4, 2, 6});
    CHECK(farthest_point_subsample(pts, 20, {0}).size() == pts.size());
}

TEST_CASE("farthest-point selection maximizes the greedy gap")
{
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vector> pts(300, Vector(2));
    for (auto& p : pts) {
        p = {u(gen), u(gen)};
    }
    const auto sel = farthest_point_subsample(pts, 40, {0});
    // Brute-force check of each greedy step.
    for (std::size_t step = 1; step < sel.size(); ++step) {
        double chosen = 1e300;
        for (std::size_t s = 0; s < step; ++s) {
            chosen = std::min(chosen, distance(pts[sel[step]], pts[sel[s]]));
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double d = 1e300;
            for (std::size_t s = 0; s < step; ++s) {
                d = std::min(d, distance(pts[i], pts[sel[s]]));
            }
            CHECK(d <= chosen + 1e-15);
        }
    }
}

TEST_CASE("sample_pf returns non-dominated points on the true front")
{
    const auto p = make_problem("GTS1");
    const auto front = sample_pf(p, 0.5, 500);
    REQUIRE(front.size() == 500);
    CHECK_FALSE(front.degenerate);
    REQUIRE(front.decisions.size() == 500);
    const double H = 1.5 + std::sin(0.25 * M_PI);
    for (std::size_t i = 0; i < front.size(); ++i) {
        const auto& f = front.points[i];
        CHECK(f[1] == doctest::Approx(1.0 - std::pow(f[0], H)).epsilon(1e-9));
        CHECK(p.evaluate(front.decisions[i], 0.5) == f);
        for (const auto& other : front.points) {
            CHECK_FALSE(dominates(other, f));
        }
    }
    const auto b = objective_bounds(front.points);
    CHECK(front.bounds == b);
    CHECK(b[0].first == doctest::Approx(0.0));
    CHECK(b[0].second == doctest::Approx(1.0));
}

TEST_CASE("three-objective reference fronts")
{
    const auto p = make_problem("GTS9");
    const auto front = sample_pf(p, 0.0, 400);
    REQUIRE(front.size() == 400);
    for (const auto& f : front.points) {
        CHECK(std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]) == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK(reference_candidates(p, 0.0, 100).size() >= 800);
    CHECK(default_reference_size(2) == 1500);
    CHECK(default_reference_size(3) == 2500);
}

TEST_CASE("sample_pf is deterministic")
{
    const auto p = make_problem("GTS11");
    const auto a = sample_pf(p, 1.3, 300);
    const auto b = sample_pf(p, 1.3, 300);
    CHECK(a.points == b.points);
}

TEST_CASE("disconnected fronts may yield fewer points than requested")
{
    const auto p = make_problem("GTS4");
    const auto front = sample_pf(p, 0.0, 50);
    CHECK(front.size() <= 50);
    CHECK(front.degenerate == (front.size() < 50));
}

TEST_CASE("front files round-trip")
{
    const auto dir = scratch_dir("roundtrip");
    const auto p = make_problem("GTS4");
    const auto front = sample_pf(p, 0.7, 120);
    write_front_files(front, p, dir / "gts4");
    CHECK(std::filesystem::exists(dir / "gts4.csv"));
    CHECK(std::filesystem::exists(dir / "gts4.json"));
    std::ifstream csv(dir / "gts4.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "f1,f2");
    const auto back = read_front_files(dir / "gts4");
    REQUIRE(back.has_value());
    CHECK(back->points == front.points);
    CHECK(back->bounds == front.bounds);
    CHECK(back->t == 0.7);
    CHECK(back->degenerate == front.degenerate);
    CHECK_FALSE(read_front_files(dir / "missing").has_value());
    std::filesystem::remove_all(dir);
}

TEST_CASE("front cache memoizes and persists")
{
    const auto dir = scratch_dir("cache");
    const auto p = make_problem("GTS1");
    {
        FrontCache cache(dir);
        const auto a = cache.get(p, 0.1, 100);
        const auto b = cache.get(p, 0.1 + 1e-14, 100);
        CHECK(a.get() == b.get());
        CHECK(cache.memory_entries() == 1);
        cache.get(p, 0.2, 100);
        CHECK(cache.memory_entries() == 2);
    }
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        files += entry.path().extension() == ".csv" ? 1 : 0;
    }
    CHECK(files == 2);
    FrontCache reloaded(dir);
    CHECK(reloaded.get(p, 0.1, 100)->points == sample_pf(p, 0.1, 100).points);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache directory from the environment")
{
    ::setenv("GTS_CACHE_DIR", "/tmp/gts_env_cache", 1);
    CHECK(FrontCache::directory_from_env(std::nullopt) == std::filesystem::path("/tmp/gts_env_cache"));
    ::unsetenv("GTS_CACHE_DIR");
    CHECK_FALSE(FrontCache::directory_from_env(std::nullopt).has_value());
    CHECK(FrontCache::directory_from_env(std::filesystem::path("x")) == std::filesystem::path("x"));
}
