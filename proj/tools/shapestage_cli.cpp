// Command-line front end over the shapestage C API.
//
//   shapestage bench --counts 100,500,1000,5000 --vertices 8 --trials 5 \
//                    --width 1024 --height 768 --seed 42 --out results.csv
//   shapestage render --doc scene.json [--options opts.json] --out scene.ppm [--compare golden.ppm]
//   shapestage canonicalize --doc scene.json

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shapestage.h"

namespace {

bool slurp(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return false;
    }
    out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return true;
}

// Session sized from the document's bounds, with the document loaded.
int64_t open_document(const std::string& path) {
    std::string text;
    if (!slurp(path, text)) {
        std::cerr << "error: cannot read " << path << '\n';
        return 0;
    }
    const int64_t h = session_create(1, 1);
    if (h <= 0) {
        std::cerr << "error: " << last_error(0) << '\n';
        return 0;
    }
    if (load_document(h, text.c_str()) != SS_OK) {
        std::cerr << "error: " << last_error(h) << '\n';
        session_destroy(h);
        return 0;
    }
    return h;
}

int run_bench(const std::vector<int64_t>& counts, int64_t vertices, int64_t trials, int64_t width, int64_t height,
              uint64_t seed, const std::string& out) {
    nlohmann::json config{{"counts", counts}, {"vertices", vertices}, {"trials", trials},
                          {"width", width},   {"height", height},     {"seed", seed}};
    const char* summary = bench_run(config.dump().c_str(), out.empty() ? nullptr : out.c_str());
    if (summary == nullptr) {
        std::cerr << "error: " << last_error(0) << '\n';
        return 1;
    }
    const auto j = nlohmann::json::parse(summary);
    for (const auto& m : j["medians"]) {
        std::cerr << "n=" << m[0] << " median_ms=" << m[1] << '\n';
    }
    std::cout << "slope_ms_per_shape=" << j["slope_ms_per_shape"].dump() << " intercept_ms=" << j["intercept_ms"].dump()
              << " r2=" << j["r2"].dump() << '\n';
    return 0;
}

int run_render(const std::string& doc, const std::string& options, const std::string& out, const std::string& compare) {
    std::string opts;
    if (!options.empty() && !slurp(options, opts)) {
        std::cerr << "error: cannot read " << options << '\n';
        return 1;
    }
    const int64_t h = open_document(doc);
    if (h == 0) {
        return 1;
    }
    const int32_t rc = render_ppm(h, opts.c_str(), out.c_str());
    if (rc != SS_OK) {
        std::cerr << "error: " << last_error(h) << '\n';
        session_destroy(h);
        return 1;
    }
    session_destroy(h);
    if (!compare.empty()) {
        std::string a;
        std::string b;
        if (!slurp(out, a) || !slurp(compare, b)) {
            std::cerr << "error: cannot read images for comparison\n";
            return 1;
        }
        if (a != b) {
            std::cerr << "render differs from " << compare << '\n';
            return 1;
        }
        std::cout << "identical to " << compare << '\n';
    }
    return 0;
}

int run_canonicalize(const std::string& doc) {
    const int64_t h = open_document(doc);
    if (h == 0) {
        return 1;
    }
    std::cout << document(h) << '\n';
    session_destroy(h);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shapestage: bounded 2D shape stage tools"};
    app.require_subcommand(1);

    std::vector<int64_t> counts{100, 500, 1000, 5000};
    int64_t vertices = 8;
    int64_t trials = 5;
    int64_t width = 1024;
    int64_t height = 768;
    uint64_t seed = 42;
    std::string csv_out;
    auto* bench = app.add_subcommand("bench", "time rendering against the number of polygons");
    bench->add_option("--counts", counts, "comma separated shape counts")->delimiter(',');
    bench->add_option("--vertices", vertices, "vertices per polygon")->check(CLI::Range(3, 1 << 20));
    bench->add_option("--trials", trials, "timed renders per count")->check(CLI::PositiveNumber);
    bench->add_option("--width", width, "stage width in pixels")->check(CLI::PositiveNumber);
    bench->add_option("--height", height, "stage height in pixels")->check(CLI::PositiveNumber);
    bench->add_option("--seed", seed, "scene generator seed");
    bench->add_option("--out", csv_out, "CSV output path");

    std::string doc;
    std::string options;
    std::string ppm_out;
    std::string compare;
    auto* render = app.add_subcommand("render", "rasterize a shape document to a binary PPM");
    render->add_option("--doc", doc, "shape document (JSON)")->required()->check(CLI::ExistingFile);
    render->add_option("--options", options, "render options (JSON)")->check(CLI::ExistingFile);
    render->add_option("--out", ppm_out, "PPM output path")->required();
    render->add_option("--compare", compare, "fail unless the output equals this file")->check(CLI::ExistingFile);

    auto* canon = app.add_subcommand("canonicalize", "print the canonical form of a shape document");
    canon->add_option("--doc", doc, "shape document (JSON)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (bench->parsed()) {
        return run_bench(counts, vertices, trials, width, height, seed, csv_out);
    }
    if (render->parsed()) {
        return run_render(doc, options, ppm_out, compare);
    }
    return run_canonicalize(doc);
}
