#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "fuzz.hpp"
#include "shapestage/binding.hpp"
#include "shapestage/error.hpp"

using namespace shapestage;

namespace {

ErrorCode code_of(std::string_view json) {
    try {
        (void)from_json(json);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("document was accepted: " << json);
    return ErrorCode::invalid_argument;
}

} // namespace

TEST_CASE("to_document: fixed examples") {
    Stage empty(StageBounds(100, 100));
    CHECK(to_json(empty) == R"({"bounds":{"width":100,"height":100},"layers":[]})");

    Stage s(StageBounds(100, 100));
    s.begin_polygon();
    s.add_vertex({0, 0});
    s.add_vertex({10, 0});
    s.add_vertex({5, 8});
    const ShapeId id = s.close_polygon();
    s.drag(id, {5, 5});
    CHECK(to_json(s) ==
          R"({"bounds":{"width":100,"height":100},"layers":[{"id":1,"shapes":[{"id":1,"kind":"polygon","vertices":[[5,5],[15,5],[10,13]],"style":"default"}]}]})");
}

TEST_CASE("empty document round trips byte for byte") {
    const std::string text = R"({"bounds":{"width":100,"height":100},"layers":[]})";
    CHECK(to_json(from_json(text)) == text);
}

TEST_CASE("transient $$ keys are tolerated on input and never emitted") {
    const std::string text = R"({"$$hashKey":"object:1","bounds":{"width":20,"height":10,"$$x":1},
        "layers":[{"id":3,"$$hashKey":"object:7","shapes":[{"$$hashKey":"object:9","id":4,"kind":"rectangle",
        "vertices":[[1,1],[5,1],[5,4],[1,4]],"style":"default"}]}]})";
    const std::string out = to_json(from_json(text));
    CHECK(out.find("$$") == std::string::npos);
    CHECK(out ==
          R"({"bounds":{"width":20,"height":10},"layers":[{"id":3,"shapes":[{"id":4,"kind":"rectangle","vertices":[[1,1],[5,1],[5,4],[1,4]],"style":"default"}]}]})");
}

TEST_CASE("from_document keeps ids and continues numbering after them") {
    Stage s = from_json(
        R"({"bounds":{"width":20,"height":10},"layers":[{"id":3,"shapes":[{"id":7,"kind":"polygon","vertices":[[0,0],[4,0],[2,3]],"style":"a"}]}]})");
    CHECK(s.find(7) != nullptr);
    CHECK(s.find(7)->translation() == Point{0, 0});
    CHECK(s.add_rectangle({0, 0}, 1, 1) == 8);
    CHECK(s.add_layer() == 4);
    CHECK(s.version() == 2);
}

TEST_CASE("malformed documents") {
    CHECK(code_of("not json") == ErrorCode::malformed_document);
    CHECK(code_of("[]") == ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":10,"height":10}})") == ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":0,"height":10},"layers":[]})") == ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":1.5,"height":10},"layers":[]})") == ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":10,"height":10},"layers":[],"extra":1})") == ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":10,"height":10},"layers":[{"id":1,"shapes":[{"id":1,"kind":"circle","vertices":[[0,0],[1,0],[0,1]],"style":"d"}]}]})") ==
          ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":10,"height":10},"layers":[{"id":1,"shapes":[{"id":1,"kind":"polygon","vertices":[[0,0],[1,0]],"style":"d"}]}]})") ==
          ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":10,"height":10},"layers":[{"id":1,"shapes":[{"id":1,"kind":"polygon","vertices":[[0,0],[1],[0,1]],"style":"d"}]}]})") ==
          ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":10,"height":10},"layers":[{"id":1,"shapes":[{"id":1,"kind":"polygon","vertices":[[0,0],[1,0],[0,1]]}]}]})") ==
          ErrorCode::malformed_document);
    CHECK(code_of(R"({"bounds":{"width":10,"height":10},"layers":[{"id":0,"shapes":[]}]})") == ErrorCode::malformed_document);
    // duplicate shape ids across layers
    CHECK(code_of(R"({"bounds":{"width":10,"height":10},"layers":[{"id":1,"shapes":[{"id":1,"kind":"polygon","vertices":[[0,0],[1,0],[0,1]],"style":"d"}]},{"id":2,"shapes":[{"id":1,"kind":"polygon","vertices":[[0,0],[1,0],[0,1]],"style":"d"}]}]})") ==
          ErrorCode::malformed_document);
    // rectangle whose corners are not axis-aligned
    CHECK(code_of(R"({"bounds":{"width":10,"height":10},"layers":[{"id":1,"shapes":[{"id":1,"kind":"rectangle","vertices":[[0,0],[2,1],[2,3],[0,3]],"style":"d"}]}]})") ==
          ErrorCode::malformed_document);
}

TEST_CASE("out-of-bounds vertex violates containment") {
    try {
        (void)from_json(
            R"({"bounds":{"width":10,"height":10},"layers":[{"id":1,"shapes":[{"id":1,"kind":"polygon","vertices":[[0,0],[11,0],[0,1]],"style":"d"}]}]})");
        FAIL("expected containment error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::containment_violation);
        CHECK(std::string(e.what()) == "document violates containment");
    }
}

TEST_CASE("numbers use the shortest round-trip form") {
    CHECK(format_number(5.0) == "5");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("pretty output parses back to the same document and ends with LF") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        Stage s = fuzz::random_stage(rng);
        const ShapeDocument doc = to_document(s);
        const std::string pretty = serialize(doc, JsonStyle::pretty);
        REQUIRE(pretty.back() == '\n');
        CHECK(pretty.find('\r') == std::string::npos);
        CHECK(parse_document(pretty) == doc);
    }
}

TEST_CASE("canonical fixpoint on fuzzed stages") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 500; ++i) {
        Stage s = fuzz::random_stage(rng);
        const std::string once = to_json(s);
        const std::string twice = to_json(from_json(once));
        REQUIRE(once == twice);
    }
}

TEST_CASE("subscribe / unsubscribe") {
    Stage s(StageBounds(50, 50));
    const ShapeId id = s.add_rectangle({1, 1}, 5, 5);

    std::vector<ChangeEvent> events;
    const auto sub = subscribe(s, [&](const ChangeEvent& e) { events.push_back(e); });
    s.drag(id, {2, 2});
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ChangeKind::shape_moved);
    unsubscribe(s, sub);
    unsubscribe(s, sub);

    Stage quiet(StageBounds(10, 10));
    CHECK_NOTHROW(quiet.add_rectangle({0, 0}, 1, 1));
}

TEST_CASE("N random mutations deliver N events with strictly increasing versions") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Stage s(StageBounds(64, 64));
    std::vector<ChangeEvent> events;
    subscribe(s, [&](const ChangeEvent& e) {
        CHECK(e.version == s.version()); // delivered after the change is applied
        events.push_back(e);
    });
    int mutations = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<ShapeId> ids;
        for (const Layer& l : s.layers()) {
            for (const Shape& sh : l.shapes) {
                ids.push_back(sh.id());
            }
        }
        const double r = u(rng);
        if (ids.empty() || r < 0.3) {
            s.add_rectangle({u(rng) * 50, u(rng) * 50}, 1 + u(rng) * 10, 1 + u(rng) * 10);
        } else if (r < 0.8) {
            s.drag(ids[rng() % ids.size()], {(u(rng) - 0.5) * 100, (u(rng) - 0.5) * 100});
        } else if (r < 0.9) {
            s.move_shape_to_top(ids[rng() % ids.size()]);
        } else {
            s.remove_shape(ids[rng() % ids.size()]);
        }
        ++mutations;
    }
    REQUIRE(events.size() == std::size_t(mutations));
    for (std::size_t i = 1; i < events.size(); ++i) {
        REQUIRE(events[i].version > events[i - 1].version);
    }
}
