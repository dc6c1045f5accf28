#include "shapestage/binding.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include <json.hpp>

#include "shapestage/error.hpp"

namespace shapestage {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& detail) {
    throw Error(ErrorCode::malformed_document, "malformed document: " + detail);
}

bool is_transient(const std::string& key) { return key.rfind("$$", 0) == 0; }

// Rejects keys outside `allowed` unless they are transient.
void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const char* where) {
    if (!obj.is_object()) {
        malformed(std::string(where) + " must be an object");
    }
    for (const auto& item : obj.items()) {
        const std::string& key = item.key();
        if (is_transient(key)) {
            continue;
        }
        bool known = false;
        for (std::string_view a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            malformed(std::string("unexpected key \"") + key + "\" in " + where);
        }
    }
    for (std::string_view a : allowed) {
        if (!obj.contains(std::string(a))) {
            malformed(std::string("missing \"") + std::string(a) + "\" in " + where);
        }
    }
}

std::uint64_t positive_id(const json& v, const char* where) {
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() > 0)) {
        const auto id = v.get<std::uint64_t>();
        if (id > 0) {
            return id;
        }
    }
    malformed(std::string(where) + " must be a positive integer");
}

int dimension(const json& v, const char* name) {
    if (!v.is_number_integer()) {
        malformed(std::string(name) + " must be an integer");
    }
    const auto n = v.get<std::int64_t>();
    if (n <= 0 || n > std::numeric_limits<int>::max()) {
        malformed(std::string(name) + " must be positive");
    }
    return static_cast<int>(n);
}

Point vertex(const json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        malformed("vertex must be [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

void append_string(std::string& out, const std::string& s) { out += json(s).dump(); }

struct Writer {
    JsonStyle style;
    std::string out;

    void newline(int depth) {
        if (style == JsonStyle::pretty) {
            out += '\n';
            out.append(static_cast<std::size_t>(depth) * 2, ' ');
        }
    }
    void key(std::string_view k) {
        out += '"';
        out += k;
        out += style == JsonStyle::pretty ? "\": " : "\":";
    }
    void vertices(const std::vector<Point>& vs) {
        const char* sep = style == JsonStyle::pretty ? ", " : ",";
        out += '[';
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i > 0) {
                out += sep;
            }
            out += '[';
            out += format_number(vs[i].x);
            out += sep;
            out += format_number(vs[i].y);
            out += ']';
        }
        out += ']';
    }
};

} // namespace

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";
    }
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

ShapeDocument to_document(const Stage& stage) {
    ShapeDocument doc;
    doc.width = stage.bounds().width();
    doc.height = stage.bounds().height();
    for (const Layer& layer : stage.layers()) {
        DocumentLayer dl{layer.id, {}};
        dl.shapes.reserve(layer.shapes.size());
        for (const Shape& s : layer.shapes) {
            dl.shapes.push_back({s.id(), s.kind(), s.effective_vertices(), s.style()});
        }
        doc.layers.push_back(std::move(dl));
    }
    return doc;
}

Stage from_document(const ShapeDocument& doc) {
    StageBounds bounds = [&] {
        try {
            return StageBounds(doc.width, doc.height);
        } catch (const Error&) {
            malformed("bounds must be positive");
        }
    }();
    const Aabb limit = bounds.box();
    std::vector<Layer> layers;
    layers.reserve(doc.layers.size());
    for (const DocumentLayer& dl : doc.layers) {
        Layer layer{dl.id, {}};
        for (const DocumentShape& ds : dl.shapes) {
            for (std::size_t i = 0; i < ds.vertices.size(); ++i) {
                const Point p = ds.vertices[i];
                if (!is_finite(p)) {
                    malformed("non-finite vertex");
                }
                if (!limit.contains(p)) {
                    throw Error(ErrorCode::containment_violation, "document violates containment");
                }
                if (i > 0 && p == ds.vertices[i - 1]) {
                    malformed("duplicate vertex");
                }
            }
            try {
                layer.shapes.emplace_back(ds.id, ds.kind, ds.vertices, ds.style);
            } catch (const Error& e) {
                malformed(e.what());
            }
        }
        layers.push_back(std::move(layer));
    }
    try {
        return Stage::from_layers(bounds, std::move(layers));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::invalid_argument) {
            malformed(e.what());
        }
        throw;
    }
}

std::string serialize(const ShapeDocument& doc, JsonStyle style) {
    Writer w{style, {}};
    const char* comma = ",";
    w.out += '{';
    w.newline(1);
    w.key("bounds");
    w.out += '{';
    w.key("width");
    w.out += std::to_string(doc.width);
    w.out += style == JsonStyle::pretty ? ", " : ",";
    w.key("height");
    w.out += std::to_string(doc.height);
    w.out += "},";
    w.newline(1);
    w.key("layers");
    w.out += '[';
    for (std::size_t li = 0; li < doc.layers.size(); ++li) {
        const DocumentLayer& layer = doc.layers[li];
        if (li > 0) {
            w.out += comma;
        }
        w.newline(2);
        w.out += '{';
        w.newline(3);
        w.key("id");
        w.out += std::to_string(layer.id);
        w.out += comma;
        w.newline(3);
        w.key("shapes");
        w.out += '[';
        for (std::size_t si = 0; si < layer.shapes.size(); ++si) {
            const DocumentShape& s = layer.shapes[si];
            if (si > 0) {
                w.out += comma;
            }
            w.newline(4);
            w.out += '{';
            w.newline(5);
            w.key("id");
            w.out += std::to_string(s.id);
            w.out += comma;
            w.newline(5);
            w.key("kind");
            append_string(w.out, std::string(to_string(s.kind)));
            w.out += comma;
            w.newline(5);
            w.key("vertices");
            w.vertices(s.vertices);
            w.out += comma;
            w.newline(5);
            w.key("style");
            append_string(w.out, s.style);
            w.newline(4);
            w.out += '}';
        }
        if (!layer.shapes.empty()) {
            w.newline(3);
        }
        w.out += ']';
        w.newline(2);
        w.out += '}';
    }
    if (!doc.layers.empty()) {
        w.newline(1);
    }
    w.out += ']';
    w.newline(0);
    w.out += '}';
    if (style == JsonStyle::pretty) {
        w.out += '\n';
    }
    return std::move(w.out);
}

ShapeDocument parse_document(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    check_keys(root, {"bounds", "layers"}, "document");
    const json& bounds = root["bounds"];
    check_keys(bounds, {"width", "height"}, "bounds");

    ShapeDocument doc;
    doc.width = dimension(bounds["width"], "width");
    doc.height = dimension(bounds["height"], "height");

    const json& layers = root["layers"];
    if (!layers.is_array()) {
        malformed("layers must be an array");
    }
    for (const json& jl : layers) {
        check_keys(jl, {"id", "shapes"}, "layer");
        DocumentLayer layer{positive_id(jl["id"], "layer id"), {}};
        const json& shapes = jl["shapes"];
        if (!shapes.is_array()) {
            malformed("shapes must be an array");
        }
        for (const json& js : shapes) {
            check_keys(js, {"id", "kind", "vertices", "style"}, "shape");
            DocumentShape shape;
            shape.id = positive_id(js["id"], "shape id");
            const json& kind = js["kind"];
            auto parsed = kind.is_string() ? parse_shape_kind(kind.get<std::string>()) : std::nullopt;
            if (!parsed) {
                malformed("kind must be \"rectangle\" or \"polygon\"");
            }
            shape.kind = *parsed;
            const json& vs = js["vertices"];
            if (!vs.is_array()) {
                malformed("vertices must be an array");
            }
            for (const json& v : vs) {
                shape.vertices.push_back(vertex(v));
            }
            if (!js["style"].is_string()) {
                malformed("style must be a string");
            }
            shape.style = js["style"].get<std::string>();
            layer.shapes.push_back(std::move(shape));
        }
        doc.layers.push_back(std::move(layer));
    }
    return doc;
}

} // namespace shapestage
