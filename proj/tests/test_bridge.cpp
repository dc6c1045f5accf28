#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "bridge_script.hpp"
#include "shapestage.h"

namespace {

std::string tmp_path(const char* name) { return std::string("/tmp/shapestage_test_") + name; }

int64_t triangle(int64_t h) {
    REQUIRE(begin_polygon(h) == SS_OK);
    REQUIRE(add_vertex(h, 10, 10));
    REQUIRE(add_vertex(h, 20, 10));
    REQUIRE(add_vertex(h, 15, 18));
    return close_polygon(h);
}

} // namespace

TEST_CASE("session lifecycle") {
    const int64_t h = session_create(100, 80);
    REQUIRE(h > 0);
    CHECK(version(h) == 0);
    CHECK(std::string(document(h)) == R"({"bounds":{"width":100,"height":80},"layers":[]})");
    CHECK(session_destroy(h) == SS_OK);
    CHECK(session_destroy(h) == SS_E_INVALID_HANDLE);

    CHECK(session_create(0, 5) == SS_E_INVALID_ARGUMENT);
    CHECK(std::string(last_error(0)).size() > 0);
    CHECK(session_create(5, -1) == SS_E_INVALID_ARGUMENT);

    const int64_t a = session_create(1, 1);
    const int64_t b = session_create(1, 1);
    CHECK(a != b);
    CHECK(session_destroy(a) == SS_OK);
    CHECK(session_destroy(b) == SS_OK);
}

TEST_CASE("polygon drawing through the boundary") {
    const int64_t h = session_create(100, 100);
    CHECK(begin_polygon(h) == SS_OK);
    CHECK(add_vertex(h, 0, 0));
    CHECK_FALSE(add_vertex(h, 0, 0));
    CHECK(std::string(last_error(h)) == "duplicate vertex");
    CHECK_FALSE(add_vertex(h, 101, 0));
    CHECK(std::string(last_error(h)) == "vertex out of bounds");
    CHECK(add_vertex(h, 10, 0));
    CHECK(close_polygon(h) == SS_E_DEGENERATE_POLYGON);
    CHECK(version(h) == 0);

    const int64_t id = triangle(h);
    CHECK(id > 0);
    CHECK(version(h) == 1);
    CHECK(close_polygon(h) == SS_E_NO_POLYGON);
    CHECK_FALSE(add_vertex(h, 1, 1));

    CHECK(begin_polygon(h) == SS_OK);
    CHECK(add_vertex(h, 1, 1));
    CHECK(cancel_polygon(h) == SS_OK);
    CHECK(close_polygon(h) == SS_E_NO_POLYGON);
    session_destroy(h);
}

TEST_CASE("drag through the boundary") {
    const int64_t h = session_create(100, 100);
    const int64_t id = triangle(h); // AABB [10,20] x [10,18]

    const int64_t token = drag_begin(h, id);
    REQUIRE(token > 0);
    CHECK(drag_begin(h, id) == SS_E_DRAG_ACTIVE);

    double x = 0;
    double y = 0;
    CHECK(drag_move(token, 5, 6, &x, &y) == SS_OK);
    CHECK(x == 5);
    CHECK(y == 6);
    CHECK(drag_move(token, 500, -500, &x, &y) == SS_OK);
    CHECK(x == 80);
    CHECK(y == -10);
    CHECK(drag_move(token, 1, 1, nullptr, nullptr) == SS_OK);
    CHECK(drag_end(token) == SS_OK);
    CHECK(drag_move(token, 1, 1, &x, &y) == SS_E_NO_ACTIVE_DRAG);
    CHECK(drag_end(token) == SS_E_NO_ACTIVE_DRAG);

    // A new drag starts from the current translation (1, 1).
    const int64_t again = drag_begin(h, id);
    CHECK(again != token);
    CHECK(drag_move(again, 2, 3, &x, &y) == SS_OK);
    CHECK(x == 3);
    CHECK(y == 4);
    CHECK(drag_end(again) == SS_OK);

    CHECK(drag_begin(h, 999) == SS_E_NO_SUCH_SHAPE);
    CHECK(drag_begin(h, -3) == SS_E_NO_SUCH_SHAPE);
    session_destroy(h);
}

TEST_CASE("hit, version and structural edits") {
    const int64_t h = session_create(50, 50);
    CHECK(hit(h, 5, 5) == SS_NO_SHAPE);
    const int64_t a = add_rectangle(h, 0, 0, 20, 20);
    const int64_t b = add_rectangle(h, 10, 10, 20, 20);
    CHECK(hit(h, 15, 15) == b);
    CHECK(move_shape_to_top(h, a) == SS_OK);
    CHECK(hit(h, 15, 15) == a);
    CHECK(remove_shape(h, a) == SS_OK);
    CHECK(remove_shape(h, a) == SS_E_NO_SUCH_SHAPE);
    CHECK(hit(h, 15, 15) == b);
    CHECK(version(h) == 4);
    CHECK(add_rectangle(h, 45, 45, 10, 10) == SS_E_OUT_OF_BOUNDS);
    session_destroy(h);
}

TEST_CASE("stale and invalid handles fail cleanly") {
    const int64_t h = session_create(10, 10);
    const int64_t id = add_rectangle(h, 1, 1, 2, 2);
    const int64_t token = drag_begin(h, id);
    session_destroy(h);

    for (int64_t bad : {h, int64_t{0}, int64_t{-7}, int64_t{1} << 40}) {
        CHECK(begin_polygon(bad) == SS_E_INVALID_HANDLE);
        CHECK_FALSE(add_vertex(bad, 1, 1));
        CHECK(close_polygon(bad) == SS_E_INVALID_HANDLE);
        CHECK(cancel_polygon(bad) == SS_E_INVALID_HANDLE);
        CHECK(drag_begin(bad, id) == SS_E_INVALID_HANDLE);
        CHECK(hit(bad, 1, 1) == SS_E_INVALID_HANDLE);
        CHECK(document(bad) == nullptr);
        CHECK(version(bad) == SS_E_INVALID_HANDLE);
        CHECK(add_rectangle(bad, 1, 1, 1, 1) == SS_E_INVALID_HANDLE);
        CHECK(remove_shape(bad, id) == SS_E_INVALID_HANDLE);
        CHECK(move_shape_to_top(bad, id) == SS_E_INVALID_HANDLE);
        CHECK(load_document(bad, "{}") == SS_E_INVALID_HANDLE);
        CHECK(render_ppm(bad, nullptr, "/dev/null") == SS_E_INVALID_HANDLE);
        CHECK(std::string(last_error(bad)) == "invalid session handle");
    }
    CHECK(drag_move(token, 1, 1, nullptr, nullptr) == SS_E_NO_ACTIVE_DRAG);
    CHECK(drag_end(token) == SS_E_NO_ACTIVE_DRAG);
}

TEST_CASE("load_document replaces the stage and keeps version monotone") {
    const int64_t h = session_create(10, 10);
    add_rectangle(h, 1, 1, 2, 2);
    const int64_t before = version(h);
    const char* doc =
        R"({"$$hashKey":"x","bounds":{"width":30,"height":20},"layers":[{"id":2,"shapes":[{"id":5,"kind":"polygon","vertices":[[0,0],[4,0],[2,3]],"style":"default"}]}]})";
    CHECK(load_document(h, doc) == SS_OK);
    CHECK(version(h) == before + 1);
    CHECK(std::string(document(h)) ==
          R"({"bounds":{"width":30,"height":20},"layers":[{"id":2,"shapes":[{"id":5,"kind":"polygon","vertices":[[0,0],[4,0],[2,3]],"style":"default"}]}]})");
    CHECK(hit(h, 2, 1) == 5);

    CHECK(load_document(h, "{") == SS_E_MALFORMED_DOCUMENT);
    CHECK(load_document(h, nullptr) == SS_E_MALFORMED_DOCUMENT);
    CHECK(load_document(h, R"({"bounds":{"width":3,"height":3},"layers":[{"id":1,"shapes":[{"id":1,"kind":"polygon","vertices":[[0,0],[4,0],[2,3]],"style":"d"}]}]})") ==
          SS_E_CONTAINMENT);
    CHECK(version(h) == before + 1);
    session_destroy(h);
}

TEST_CASE("render_ppm writes a P6 file") {
    const int64_t h = session_create(4, 3);
    add_rectangle(h, 0, 0, 4, 3);
    const std::string path = tmp_path("render.ppm");
    CHECK(render_ppm(h, R"({"styles":{"default":{"fill":[9,8,7]}},"background":[0,0,0]})", path.c_str()) == SS_OK);
    std::ifstream in(path, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(bytes.substr(0, 11) == "P6\n4 3\n255\n");
    REQUIRE(bytes.size() == 11 + 36);
    CHECK(bytes[11] == 9);

    CHECK(render_ppm(h, R"({"styles":{"other":{}}})", path.c_str()) == SS_E_UNKNOWN_STYLE);
    CHECK(render_ppm(h, "not json", path.c_str()) == SS_E_INVALID_ARGUMENT);
    CHECK(render_ppm(h, nullptr, "/nonexistent-dir/x.ppm") == SS_E_IO);
    std::remove(path.c_str());
    session_destroy(h);
}

TEST_CASE("bench_run through the boundary") {
    const std::string csv = tmp_path("bench.csv");
    const char* summary = bench_run(R"({"counts":[5,10],"vertices":4,"trials":2,"width":64,"height":48,"seed":3})", csv.c_str());
    REQUIRE(summary != nullptr);
    CHECK(std::string(summary).find("\"r2\":") != std::string::npos);
    std::ifstream in(csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
    }
    CHECK(lines == 5);
    std::remove(csv.c_str());

    CHECK(bench_run(R"({"counts":[5],"trials":0})", nullptr) == nullptr);
    CHECK(std::string(last_error(0)).size() > 0);
}

TEST_CASE("differential scripts agree with the core") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        const auto outcome = bridge_script::run(rng, 150);
        REQUIRE_MESSAGE(outcome.ok, "script " << i << ": " << outcome.failure);
    }
}

TEST_CASE("random arguments and stale handles never crash") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-50.0, 150.0);
    std::vector<int64_t> handles;
    std::vector<int64_t> tokens;
    for (int i = 0; i < 5000; ++i) {
        const int64_t h = handles.empty() || rng() % 10 == 0 ? int64_t(rng() % 40) - 5 : handles[rng() % handles.size()];
        const int64_t t = tokens.empty() || rng() % 4 == 0 ? int64_t(rng() % 40) - 5 : tokens[rng() % tokens.size()];
        const int64_t id = int64_t(rng() % 20) - 3;
        switch (rng() % 14) {
        case 0:
            if (auto nh = session_create(int64_t(rng() % 120) - 10, int64_t(rng() % 120) - 10); nh > 0) {
                handles.push_back(nh);
            }
            break;
        case 1:
            session_destroy(h);
            break;
        case 2:
            begin_polygon(h);
            break;
        case 3:
            add_vertex(h, u(rng), u(rng));
            break;
        case 4:
            close_polygon(h);
            break;
        case 5:
            if (auto nt = drag_begin(h, id); nt > 0) {
                tokens.push_back(nt);
            }
            break;
        case 6:
            drag_move(t, u(rng) * 3, u(rng) * 3, nullptr, nullptr);
            break;
        case 7:
            drag_end(t);
            break;
        case 8:
            hit(h, u(rng), u(rng));
            break;
        case 9:
            (void)document(h);
            break;
        case 10:
            add_rectangle(h, u(rng), u(rng), u(rng), u(rng));
            break;
        case 11:
            remove_shape(h, id);
            break;
        case 12:
            move_shape_to_top(h, id);
            break;
        default:
            drag_move(t, std::nan(""), 1, nullptr, nullptr);
        }
    }
    // Everything still alive must satisfy containment.
    for (int64_t h : handles) {
        const char* doc = document(h);
        if (doc == nullptr) {
            continue; // destroyed during the fuzz
        }
        // from_json rejects any vertex outside the bounds.
        CHECK_NOTHROW((void)shapestage::from_json(doc));
        session_destroy(h);
    }
}
