#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "shapestage/render.hpp"
#include "shapestage/scene.hpp"

namespace shapestage::bench {

struct BenchConfig {
    std::vector<std::size_t> shape_counts;
    std::size_t vertices_per_shape = 8;
    std::size_t trials = 5;
    StageBounds stage{1024, 768};
    std::uint64_t seed = 42;
};

struct BenchRecord {
    std::size_t n_shapes = 0;
    std::size_t n_vertices = 0;
    std::size_t trial = 0;
    double elapsed_ms = 0.0;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct MedianPoint {
    std::size_t n_shapes = 0;
    double median_ms = 0.0;
};

struct BenchResult {
    std::vector<BenchRecord> records;
    std::vector<MedianPoint> medians; // one per shape count, in config order
    LinearFit fit;
};

/// Throws Error(invalid_argument) for empty counts, fewer than three
/// vertices per shape or zero trials.
void validate(const BenchConfig& config);

/// n random star-shaped polygons on one layer: each takes
/// vertices_per_shape points inside a random sub-box of the stage, sorted by
/// angle around their centroid. Same config and n give the same stage.
Stage generate_scene(const BenchConfig& config, std::size_t n);

/// Style table used for timed renders (every generated shape uses the
/// default style).
StyleTable bench_styles();

/// For each count and trial: build the scene, render once to warm up, then
/// time a second render. The fit is least squares over per-count medians.
BenchResult run(const BenchConfig& config);

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys);
double median(std::vector<double> values);

/// Header "n_shapes,n_vertices,trial,elapsed_ms" then one LF-terminated row
/// per record. Throws Error(io_failure) if the stream fails.
void write_csv(std::span<const BenchRecord> records, std::ostream& out);

} // namespace shapestage::bench
