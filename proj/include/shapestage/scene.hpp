#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapestage/geometry.hpp"

namespace shapestage {

using ShapeId = std::uint64_t;
using LayerId = std::uint64_t;

inline constexpr std::string_view kDefaultStyle = "default";

/// Integer canvas extent; the drawable area is [0, width] x [0, height].
class StageBounds {
public:
    /// Throws Error(invalid_argument) unless both dimensions are positive.
    StageBounds(long long width, long long height);

    int width() const { return width_; }
    int height() const { return height_; }
    Aabb box() const { return {0.0, 0.0, double(width_), double(height_)}; }

    friend bool operator==(const StageBounds&, const StageBounds&) = default;

private:
    int width_;
    int height_;
};

enum class ShapeKind { rectangle, polygon };

std::string_view to_string(ShapeKind kind);
std::optional<ShapeKind> parse_shape_kind(std::string_view text);

/// A rectangle or polygon stored as base vertices plus a translation.
/// Rectangles are four-vertex polygons whose edges are axis-parallel.
class Shape {
public:
    Shape(ShapeId id, ShapeKind kind, std::vector<Point> base_vertices, std::string style);

    ShapeId id() const { return id_; }
    ShapeKind kind() const { return kind_; }
    std::span<const Point> base_vertices() const { return base_; }
    Point translation() const { return translation_; }
    const std::string& style() const { return style_; }

    const Aabb& base_aabb() const { return base_box_; }
    Aabb effective_aabb() const;
    std::vector<Point> effective_vertices() const;

private:
    friend class Stage;

    ShapeId id_;
    ShapeKind kind_;
    std::vector<Point> base_;
    Aabb base_box_;
    Point translation_{};
    std::string style_;
};

struct Layer {
    LayerId id = 0;
    std::vector<Shape> shapes; // bottom to top
};

/// Nearest translation to `proposed` that keeps the shape's base AABB,
/// shifted by it, inside the bounds. Axes are clamped independently. An
/// axis on which the shape is larger than the stage pins the shape's min
/// edge to 0.
Point clamp_translation(const Shape& shape, Point proposed, const StageBounds& bounds);

enum class ChangeKind { shape_added, shape_removed, shape_moved, order_changed };

std::string_view to_string(ChangeKind kind);

struct ChangeEvent {
    std::uint64_t version = 0;
    ChangeKind kind = ChangeKind::shape_added;
    ShapeId shape = 0; // 0 when the change is not about one shape
};

/// Retained scene: layers of shapes over a bounded canvas.
///
/// Every shape's effective AABB stays inside the bounds after each public
/// call. Mutations bump version() by exactly one and notify subscribers
/// synchronously, after the change is applied. Observers may not mutate the
/// stage they observe; doing so throws Error(reentrant_mutation).
///
/// The in-progress polygon of the builder is transient and is not part of
/// the versioned state.
class Stage {
public:
    using Observer = std::function<void(const ChangeEvent&)>;
    using SubscriptionId = std::uint64_t;

    explicit Stage(StageBounds bounds, std::optional<std::string> background = std::nullopt);

    /// Rebuilds a stage from explicit layers, keeping their ids and
    /// translations. Throws Error(containment_violation) if any shape leaves
    /// the bounds and Error(invalid_argument) on duplicate ids.
    static Stage from_layers(StageBounds bounds, std::vector<Layer> layers);

    Stage(Stage&&) noexcept = default;
    Stage& operator=(Stage&&) noexcept = default;
    Stage(const Stage&) = delete;
    Stage& operator=(const Stage&) = delete;

    const StageBounds& bounds() const { return bounds_; }
    std::span<const Layer> layers() const { return layers_; }
    std::uint64_t version() const { return version_; }
    const std::optional<std::string>& background() const { return background_; }
    std::size_t shape_count() const;

    const Shape* find(ShapeId id) const;
    /// Throws Error(no_such_shape).
    const Shape& shape(ShapeId id) const;

    LayerId add_layer();

    // Polygon builder. New shapes go to `layer`, or the topmost layer
    // (created on demand) when none is given.
    void begin_polygon(std::string style = std::string(kDefaultStyle), std::optional<LayerId> layer = std::nullopt);
    void add_vertex(Point pt);
    ShapeId close_polygon();
    void cancel_polygon();
    bool polygon_in_progress() const { return builder_.has_value(); }
    std::span<const Point> pending_vertices() const;

    ShapeId add_polygon(std::vector<Point> vertices, std::string style = std::string(kDefaultStyle),
                        std::optional<LayerId> layer = std::nullopt);
    ShapeId add_rectangle(Point top_left, double width, double height,
                          std::string style = std::string(kDefaultStyle),
                          std::optional<LayerId> layer = std::nullopt);

    /// Sets the shape's translation to the clamped proposal and returns it.
    Point drag(ShapeId id, Point proposed_translation);
    void remove_shape(ShapeId id);
    /// Moves the shape to the top of its own layer.
    void move_shape_to_top(ShapeId id);

    /// Topmost shape containing pt (last layer first, last shape first).
    std::optional<ShapeId> hit_test(Point pt) const;

    SubscriptionId subscribe(Observer observer);
    /// Unknown or already removed ids are ignored.
    void unsubscribe(SubscriptionId id);

private:
    struct Builder {
        std::string style;
        std::optional<LayerId> layer;
        std::vector<Point> vertices;
    };
    struct Location {
        std::size_t layer;
        std::size_t index;
    };

    void check_mutable() const;
    void check_vertex(Point pt) const;
    std::optional<Location> locate(ShapeId id) const;
    Location require(ShapeId id) const;
    Layer& target_layer(std::optional<LayerId> layer);
    ShapeId insert(ShapeKind kind, std::vector<Point> vertices, std::string style, std::optional<LayerId> layer);
    void commit(ChangeKind kind, ShapeId shape);

    StageBounds bounds_;
    std::optional<std::string> background_;
    std::vector<Layer> layers_;
    std::uint64_t version_ = 0;
    ShapeId next_shape_id_ = 1;
    LayerId next_layer_id_ = 1;
    std::optional<Builder> builder_;

    std::vector<std::pair<SubscriptionId, Observer>> observers_;
    SubscriptionId next_subscription_ = 1;
    bool notifying_ = false;
};

} // namespace shapestage
