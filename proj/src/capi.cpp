#include "shapestage.h"

#include <fstream>
#include <memory>
#include <mutex>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <unordered_map>

#include <json.hpp>

#include "shapestage/bench.hpp"
#include "shapestage/binding.hpp"
#include "shapestage/error.hpp"
#include "shapestage/render.hpp"
#include "shapestage/scene.hpp"

namespace {

using namespace shapestage;

static_assert(int(ErrorCode::invalid_argument) == SS_E_INVALID_ARGUMENT);
static_assert(int(ErrorCode::degenerate_polygon) == SS_E_DEGENERATE_POLYGON);
static_assert(int(ErrorCode::no_such_shape) == SS_E_NO_SUCH_SHAPE);
static_assert(int(ErrorCode::drag_active) == SS_E_DRAG_ACTIVE);
static_assert(int(ErrorCode::no_active_drag) == SS_E_NO_ACTIVE_DRAG);
static_assert(int(ErrorCode::malformed_document) == SS_E_MALFORMED_DOCUMENT);
static_assert(int(ErrorCode::containment_violation) == SS_E_CONTAINMENT);
static_assert(int(ErrorCode::no_polygon_in_progress) == SS_E_NO_POLYGON);
static_assert(int(ErrorCode::io_failure) == SS_E_IO);
static_assert(int(ErrorCode::out_of_bounds) == SS_E_OUT_OF_BOUNDS);
static_assert(int(ErrorCode::duplicate_vertex) == SS_E_DUPLICATE_VERTEX);
static_assert(int(ErrorCode::unknown_style) == SS_E_UNKNOWN_STYLE);
static_assert(int(ErrorCode::malformed_image) == SS_E_MALFORMED_IMAGE);

struct DragState {
    int64_t token;
    ShapeId shape;
    Point start;
};

struct Session {
    explicit Session(Stage s) : stage(std::move(s)) {}

    Stage stage;
    std::uint64_t version_base = 0; // keeps version() monotone across load_document
    std::optional<DragState> drag;
    std::string last_error;
    std::string text;

    int64_t version() const { return static_cast<int64_t>(version_base + stage.version()); }
};

struct Registry {
    std::mutex mu;
    std::unordered_map<int64_t, std::unique_ptr<Session>> sessions;
    std::unordered_map<int64_t, int64_t> drag_tokens; // token -> session
    int64_t next_session = 1;
    int64_t next_token = 1;
};

Registry& registry() {
    static Registry r;
    return r;
}

thread_local std::string g_last_error;
thread_local std::string g_text;

Session* find_session(int64_t handle) {
    Registry& r = registry();
    std::lock_guard lock(r.mu);
    auto it = r.sessions.find(handle);
    return it == r.sessions.end() ? nullptr : it->second.get();
}

// Session owning an active drag token, or null.
std::pair<int64_t, Session*> find_drag(int64_t token) {
    Registry& r = registry();
    std::lock_guard lock(r.mu);
    auto t = r.drag_tokens.find(token);
    if (t == r.drag_tokens.end()) {
        return {0, nullptr};
    }
    auto s = r.sessions.find(t->second);
    return {t->second, s == r.sessions.end() ? nullptr : s->second.get()};
}

int32_t fail(std::string& slot, int32_t code, std::string message) {
    slot = std::move(message);
    return code;
}

template <class R>
R error_value(int32_t code) {
    if constexpr (std::is_pointer_v<R>) {
        return nullptr;
    } else {
        return static_cast<R>(code);
    }
}

// Runs f against the session, converting exceptions into codes recorded on
// the session (or globally when the handle is bad).
template <class F>
auto guarded(int64_t handle, F&& f) -> decltype(f(std::declval<Session&>())) {
    using R = decltype(f(std::declval<Session&>()));
    Session* s = find_session(handle);
    if (s == nullptr) {
        return error_value<R>(fail(g_last_error, SS_E_INVALID_HANDLE, "invalid session handle"));
    }
    try {
        s->last_error.clear();
        return f(*s);
    } catch (const Error& e) {
        return error_value<R>(fail(s->last_error, static_cast<int32_t>(e.code()), e.what()));
    } catch (const std::bad_alloc&) {
        return error_value<R>(fail(s->last_error, SS_E_INTERNAL, "out of memory"));
    } catch (const std::exception& e) {
        return error_value<R>(fail(s->last_error, SS_E_INTERNAL, e.what()));
    }
}

Rgb parse_rgb(const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 3) {
        throw Error(ErrorCode::invalid_argument, "colour must be [r, g, b]");
    }
    std::uint8_t c[3];
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number_integer() || v[i].get<int64_t>() < 0 || v[i].get<int64_t>() > 255) {
            throw Error(ErrorCode::invalid_argument, "colour channels must be integers in [0, 255]");
        }
        c[i] = static_cast<std::uint8_t>(v[i].get<int>());
    }
    return {c[0], c[1], c[2]};
}

nlohmann::json parse_options(const char* text) {
    if (text == nullptr || *text == '\0') {
        return nlohmann::json::object();
    }
    try {
        auto j = nlohmann::json::parse(text);
        if (!j.is_object()) {
            throw Error(ErrorCode::invalid_argument, "options must be a JSON object");
        }
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_argument, std::string("bad options JSON: ") + e.what());
    }
}

Framebuffer load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io_failure, "cannot open " + path);
    }
    return read_ppm(in);
}

std::size_t positive_count(const nlohmann::json& v, const char* name) {
    if (!v.is_number_integer() || v.get<int64_t>() < 0) {
        throw Error(ErrorCode::invalid_argument, std::string(name) + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

} // namespace

extern "C" {

int64_t session_create(int64_t width, int64_t height) {
    try {
        auto session = std::make_unique<Session>(Stage(StageBounds(width, height)));
        Registry& r = registry();
        std::lock_guard lock(r.mu);
        const int64_t handle = r.next_session++;
        r.sessions.emplace(handle, std::move(session));
        return handle;
    } catch (const Error& e) {
        return fail(g_last_error, static_cast<int32_t>(e.code()), e.what());
    } catch (const std::exception& e) {
        return fail(g_last_error, SS_E_INTERNAL, e.what());
    }
}

int32_t session_destroy(int64_t session) {
    std::unique_ptr<Session> doomed;
    {
        Registry& r = registry();
        std::lock_guard lock(r.mu);
        auto it = r.sessions.find(session);
        if (it == r.sessions.end()) {
            return fail(g_last_error, SS_E_INVALID_HANDLE, "invalid session handle");
        }
        if (it->second->drag) {
            r.drag_tokens.erase(it->second->drag->token);
        }
        doomed = std::move(it->second);
        r.sessions.erase(it);
    }
    return SS_OK;
}

int32_t begin_polygon(int64_t session) {
    return guarded(session, [](Session& s) {
        s.stage.begin_polygon();
        return int32_t{SS_OK};
    });
}

bool add_vertex(int64_t session, double x, double y) {
    const int32_t rc = guarded(session, [&](Session& s) {
        s.stage.add_vertex({x, y});
        return int32_t{SS_OK};
    });
    return rc == SS_OK;
}

int64_t close_polygon(int64_t session) {
    return guarded(session, [](Session& s) { return static_cast<int64_t>(s.stage.close_polygon()); });
}

int32_t cancel_polygon(int64_t session) {
    return guarded(session, [](Session& s) {
        s.stage.cancel_polygon();
        return int32_t{SS_OK};
    });
}

int64_t drag_begin(int64_t session, int64_t shape_id) {
    return guarded(session, [&](Session& s) -> int64_t {
        if (s.drag) {
            return fail(s.last_error, SS_E_DRAG_ACTIVE, "a drag is already active on this session");
        }
        if (shape_id <= 0) {
            return fail(s.last_error, SS_E_NO_SUCH_SHAPE, "no such shape");
        }
        const Shape& shape = s.stage.shape(static_cast<ShapeId>(shape_id));
        Registry& r = registry();
        std::lock_guard lock(r.mu);
        const int64_t token = r.next_token++;
        r.drag_tokens.emplace(token, session);
        s.drag = DragState{token, shape.id(), shape.translation()};
        return token;
    });
}

int32_t drag_move(int64_t token, double x, double y, double* applied_x, double* applied_y) {
    auto [handle, s] = find_drag(token);
    if (s == nullptr || !s->drag || s->drag->token != token) {
        return fail(g_last_error, SS_E_NO_ACTIVE_DRAG, "no active drag for this token");
    }
    return guarded(handle, [&](Session& ss) {
        const Point proposed{ss.drag->start.x + x, ss.drag->start.y + y};
        const Point applied = ss.stage.drag(ss.drag->shape, proposed);
        if (applied_x != nullptr) {
            *applied_x = applied.x;
        }
        if (applied_y != nullptr) {
            *applied_y = applied.y;
        }
        return int32_t{SS_OK};
    });
}

int32_t drag_end(int64_t token) {
    auto [handle, s] = find_drag(token);
    if (s == nullptr || !s->drag || s->drag->token != token) {
        return fail(g_last_error, SS_E_NO_ACTIVE_DRAG, "no active drag for this token");
    }
    Registry& r = registry();
    std::lock_guard lock(r.mu);
    r.drag_tokens.erase(token);
    s->drag.reset();
    return SS_OK;
}

int64_t hit(int64_t session, double x, double y) {
    return guarded(session, [&](Session& s) -> int64_t {
        auto id = s.stage.hit_test({x, y});
        return id ? static_cast<int64_t>(*id) : SS_NO_SHAPE;
    });
}

const char* document(int64_t session) {
    return guarded(session, [](Session& s) -> const char* {
        s.text = to_json(s.stage);
        return s.text.c_str();
    });
}

int64_t version(int64_t session) {
    return guarded(session, [](Session& s) { return s.version(); });
}

int64_t add_rectangle(int64_t session, double x, double y, double width, double height) {
    return guarded(session,
                   [&](Session& s) { return static_cast<int64_t>(s.stage.add_rectangle({x, y}, width, height)); });
}

int32_t remove_shape(int64_t session, int64_t shape_id) {
    return guarded(session, [&](Session& s) {
        if (shape_id <= 0) {
            throw Error(ErrorCode::no_such_shape, "no such shape");
        }
        s.stage.remove_shape(static_cast<ShapeId>(shape_id));
        return int32_t{SS_OK};
    });
}

int32_t move_shape_to_top(int64_t session, int64_t shape_id) {
    return guarded(session, [&](Session& s) {
        if (shape_id <= 0) {
            throw Error(ErrorCode::no_such_shape, "no such shape");
        }
        s.stage.move_shape_to_top(static_cast<ShapeId>(shape_id));
        return int32_t{SS_OK};
    });
}

int32_t load_document(int64_t session, const char* json) {
    return guarded(session, [&](Session& s) {
        if (json == nullptr) {
            throw Error(ErrorCode::malformed_document, "malformed document: null input");
        }
        Stage next = from_json(json);
        const auto previous = static_cast<std::uint64_t>(s.version());
        s.stage = std::move(next);
        s.version_base = previous + 1;
        if (s.drag) {
            Registry& r = registry();
            std::lock_guard lock(r.mu);
            r.drag_tokens.erase(s.drag->token);
            s.drag.reset();
        }
        return int32_t{SS_OK};
    });
}

int32_t render_ppm(int64_t session, const char* options_json, const char* out_path) {
    return guarded(session, [&](Session& s) {
        if (out_path == nullptr) {
            throw Error(ErrorCode::invalid_argument, "output path is required");
        }
        const nlohmann::json opts = parse_options(options_json);
        StyleTable styles = bench::bench_styles();
        if (opts.contains("styles")) {
            const auto& js = opts["styles"];
            if (!js.is_object()) {
                throw Error(ErrorCode::invalid_argument, "styles must be an object");
            }
            styles.clear();
            for (const auto& item : js.items()) {
                const auto& v = item.value();
                Style st;
                st.fill = parse_rgb(v.value("fill", nlohmann::json::array({255, 255, 255})));
                st.stroke = parse_rgb(v.value("stroke", nlohmann::json::array({0, 0, 0})));
                st.stroke_width = static_cast<int>(positive_count(v.value("stroke_width", nlohmann::json(0)), "stroke_width"));
                styles[item.key()] = st;
            }
        }
        Background background = Rgb{255, 255, 255};
        if (opts.contains("background")) {
            const auto& bg = opts["background"];
            if (bg.is_string()) {
                background = load_ppm(bg.get<std::string>());
            } else {
                background = parse_rgb(bg);
            }
        }
        const Framebuffer fb = render(s.stage, styles, background);
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw Error(ErrorCode::io_failure, std::string("cannot open ") + out_path);
        }
        write_ppm(fb, out);
        return int32_t{SS_OK};
    });
}

const char* bench_run(const char* config_json, const char* csv_path) {
    try {
        const nlohmann::json j = parse_options(config_json);
        bench::BenchConfig config;
        if (j.contains("counts")) {
            config.shape_counts.clear();
            if (!j["counts"].is_array()) {
                throw Error(ErrorCode::invalid_argument, "counts must be an array");
            }
            for (const auto& c : j["counts"]) {
                config.shape_counts.push_back(positive_count(c, "count"));
            }
        }
        config.vertices_per_shape = positive_count(j.value("vertices", nlohmann::json(8)), "vertices");
        config.trials = positive_count(j.value("trials", nlohmann::json(5)), "trials");
        config.stage = StageBounds(static_cast<long long>(positive_count(j.value("width", nlohmann::json(1024)), "width")),
                                   static_cast<long long>(positive_count(j.value("height", nlohmann::json(768)), "height")));
        config.seed = positive_count(j.value("seed", nlohmann::json(42)), "seed");

        const bench::BenchResult result = bench::run(config);
        if (csv_path != nullptr) {
            std::ofstream out(csv_path, std::ios::binary);
            if (!out) {
                throw Error(ErrorCode::io_failure, std::string("cannot open ") + csv_path);
            }
            bench::write_csv(result.records, out);
        }
        std::ostringstream summary;
        summary << "{\"slope_ms_per_shape\":" << format_number(result.fit.slope)
                << ",\"intercept_ms\":" << format_number(result.fit.intercept)
                << ",\"r2\":" << format_number(result.fit.r2) << ",\"medians\":[";
        for (std::size_t i = 0; i < result.medians.size(); ++i) {
            summary << (i ? "," : "") << '[' << result.medians[i].n_shapes << ','
                    << format_number(result.medians[i].median_ms) << ']';
        }
        summary << "]}";
        g_text = summary.str();
        g_last_error.clear();
        return g_text.c_str();
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return nullptr;
    }
}

const char* last_error(int64_t session) {
    if (session == 0) {
        return g_last_error.c_str();
    }
    Session* s = find_session(session);
    if (s == nullptr) {
        return g_last_error.c_str();
    }
    return s->last_error.c_str();
}

} // extern "C"
