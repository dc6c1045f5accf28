#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shapestage/scene.hpp"

namespace shapestage {

// Canonical JSON form of a stage:
//
//   {"bounds":{"width":W,"height":H},
//    "layers":[{"id":L,"shapes":[{"id":S,"kind":"polygon","vertices":[[x,y],...],"style":"name"}]}]}
//
// Vertices are effective (translation applied). Arrays follow z-order,
// bottom first. Numbers use the shortest text that round-trips. Keys
// starting with "$$" are transient: accepted on input, never written.

struct DocumentShape {
    ShapeId id = 0;
    ShapeKind kind = ShapeKind::polygon;
    std::vector<Point> vertices;
    std::string style;

    friend bool operator==(const DocumentShape&, const DocumentShape&) = default;
};

struct DocumentLayer {
    LayerId id = 0;
    std::vector<DocumentShape> shapes;

    friend bool operator==(const DocumentLayer&, const DocumentLayer&) = default;
};

struct ShapeDocument {
    int width = 0;
    int height = 0;
    std::vector<DocumentLayer> layers;

    friend bool operator==(const ShapeDocument&, const ShapeDocument&) = default;
};

enum class JsonStyle { compact, pretty };

ShapeDocument to_document(const Stage& stage);

/// Shapes come back with translation (0, 0) and their document ids.
/// Throws Error(malformed_document) for bad geometry or ids and
/// Error(containment_violation) for vertices outside the bounds.
Stage from_document(const ShapeDocument& doc);

/// Pretty output ends with a single LF.
std::string serialize(const ShapeDocument& doc, JsonStyle style = JsonStyle::compact);

/// Schema check only; throws Error(malformed_document).
ShapeDocument parse_document(std::string_view json);

inline std::string to_json(const Stage& stage, JsonStyle style = JsonStyle::compact) {
    return serialize(to_document(stage), style);
}

inline Stage from_json(std::string_view json) { return from_document(parse_document(json)); }

/// The observer sees one ChangeEvent per mutation, after it is applied.
inline Stage::SubscriptionId subscribe(Stage& stage, Stage::Observer observer) {
    return stage.subscribe(std::move(observer));
}

inline void unsubscribe(Stage& stage, Stage::SubscriptionId id) { stage.unsubscribe(id); }

/// Shortest round-trip decimal text for a finite double; -0 prints as 0.
std::string format_number(double value);

} // namespace shapestage
