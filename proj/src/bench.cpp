#include "shapestage/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "shapestage/binding.hpp"
#include "shapestage/error.hpp"

namespace shapestage::bench {

void validate(const BenchConfig& config) {
    if (config.shape_counts.empty()) {
        throw Error(ErrorCode::invalid_argument, "at least one shape count is required");
    }
    if (std::any_of(config.shape_counts.begin(), config.shape_counts.end(), [](std::size_t n) { return n == 0; })) {
        throw Error(ErrorCode::invalid_argument, "shape counts must be positive");
    }
    if (config.vertices_per_shape < 3) {
        throw Error(ErrorCode::invalid_argument, "vertices per shape must be at least 3");
    }
    if (config.trials < 1) {
        throw Error(ErrorCode::invalid_argument, "trials must be at least 1");
    }
}

Stage generate_scene(const BenchConfig& config, std::size_t n) {
    if (config.vertices_per_shape < 3) {
        throw Error(ErrorCode::invalid_argument, "vertices per shape must be at least 3");
    }
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(std::uint64_t(n) >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double w = config.stage.width();
    const double h = config.stage.height();
    Stage stage(config.stage);
    std::vector<Point> pts(config.vertices_per_shape);
    std::vector<std::pair<double, Point>> keyed(pts.size());

    for (std::size_t made = 0; made < n;) {
        const double bw = w * (0.05 + 0.15 * unit(rng));
        const double bh = h * (0.05 + 0.15 * unit(rng));
        const double x0 = (w - bw) * unit(rng);
        const double y0 = (h - bh) * unit(rng);
        Point c{};
        for (Point& p : pts) {
            p = {x0 + bw * unit(rng), y0 + bh * unit(rng)};
            c = c + p;
        }
        c = {c.x / double(pts.size()), c.y / double(pts.size())};
        for (std::size_t i = 0; i < pts.size(); ++i) {
            keyed[i] = {std::atan2(pts[i].y - c.y, pts[i].x - c.x), pts[i]};
        }
        std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Point> ordered;
        ordered.reserve(keyed.size());
        for (const auto& [angle, p] : keyed) {
            ordered.push_back(p);
        }
        try {
            stage.add_polygon(std::move(ordered));
            ++made;
        } catch (const Error&) {
            // Coincident samples; draw again.
        }
    }
    return stage;
}

StyleTable bench_styles() {
    return {{std::string(kDefaultStyle), Style{{70, 130, 180}, {20, 40, 80}, 1}}};
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.empty()) {
        throw Error(ErrorCode::invalid_argument, "fit needs matching, non-empty samples");
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    LinearFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
    return fit;
}

BenchResult run(const BenchConfig& config) {
    validate(config);
    using clock = std::chrono::steady_clock;
    const StyleTable styles = bench_styles();

    BenchResult result;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t n : config.shape_counts) {
        std::vector<double> times;
        for (std::size_t trial = 0; trial < config.trials; ++trial) {
            const Stage scene = generate_scene(config, n);
            (void)render(scene, styles);
            const auto start = clock::now();
            const Framebuffer fb = render(scene, styles);
            const auto stop = clock::now();
            (void)fb;
            const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
            result.records.push_back({n, config.vertices_per_shape, trial, ms});
            times.push_back(ms);
        }
        const double m = median(times);
        result.medians.push_back({n, m});
        xs.push_back(static_cast<double>(n));
        ys.push_back(m);
    }
    result.fit = fit_line(xs, ys);
    return result;
}

void write_csv(std::span<const BenchRecord> records, std::ostream& out) {
    out << "n_shapes,n_vertices,trial,elapsed_ms\n";
    for (const BenchRecord& r : records) {
        out << r.n_shapes << ',' << r.n_vertices << ',' << r.trial << ',' << format_number(r.elapsed_ms) << '\n';
    }
    out.flush();
    if (!out) {
        throw Error(ErrorCode::io_failure, "failed to write CSV");
    }
}

} // namespace shapestage::bench
