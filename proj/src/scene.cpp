#include "shapestage/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "shapestage/error.hpp"

namespace shapestage {

namespace {

bool is_axis_rectangle(std::span<const Point> v) {
    if (v.size() != 4) {
        return false;
    }
    std::set<double> xs;
    std::set<double> ys;
    for (std::size_t i = 0; i < 4; ++i) {
        const Point a = v[i];
        const Point b = v[(i + 1) % 4];
        // Each edge must be axis-parallel with nonzero length.
        if ((a.x == b.x) == (a.y == b.y)) {
            return false;
        }
        xs.insert(a.x);
        ys.insert(a.y);
    }
    return xs.size() == 2 && ys.size() == 2;
}

// Feasible translations along one axis: min_edge + t >= 0 (t >= -min_edge
// exactly) and max_edge + t <= limit after rounding. Feasible proposals are
// returned untouched; others go to the nearest end of the range.
double clamp_axis(double proposed, double min_edge, double max_edge, double limit) {
    const double lo = -min_edge;
    auto fits_high = [&](double t) { return max_edge + t <= limit; };
    if (min_edge + proposed >= 0.0 && fits_high(proposed)) {
        return proposed;
    }
    if (!fits_high(lo)) {
        return lo; // wider than the stage: keep the min edge visible
    }
    double hi = limit - max_edge;
    while (!fits_high(hi)) {
        hi = std::nextafter(hi, -std::numeric_limits<double>::infinity());
    }
    return std::clamp(proposed, lo, hi);
}

} // namespace

StageBounds::StageBounds(long long width, long long height) {
    constexpr long long kMax = std::numeric_limits<int>::max();
    if (width <= 0 || height <= 0 || width > kMax || height > kMax) {
        throw Error(ErrorCode::invalid_argument, "stage dimensions must be positive");
    }
    width_ = static_cast<int>(width);
    height_ = static_cast<int>(height);
}

std::string_view to_string(ShapeKind kind) {
    switch (kind) {
    case ShapeKind::rectangle:
        return "rectangle";
    case ShapeKind::polygon:
        return "polygon";
    }
    return "polygon";
}

std::optional<ShapeKind> parse_shape_kind(std::string_view text) {
    if (text == "rectangle") {
        return ShapeKind::rectangle;
    }
    if (text == "polygon") {
        return ShapeKind::polygon;
    }
    return std::nullopt;
}

std::string_view to_string(ChangeKind kind) {
    switch (kind) {
    case ChangeKind::shape_added:
        return "shape-added";
    case ChangeKind::shape_removed:
        return "shape-removed";
    case ChangeKind::shape_moved:
        return "shape-moved";
    case ChangeKind::order_changed:
        return "order-changed";
    }
    return "order-changed";
}

Shape::Shape(ShapeId id, ShapeKind kind, std::vector<Point> base_vertices, std::string style)
    : id_(id), kind_(kind), base_(std::move(base_vertices)), style_(std::move(style)) {
    if (base_.size() < 3) {
        throw Error(ErrorCode::degenerate_polygon, "degenerate polygon");
    }
    if (kind_ == ShapeKind::rectangle && !is_axis_rectangle(base_)) {
        throw Error(ErrorCode::degenerate_polygon, "rectangle vertices must form an axis-aligned rectangle");
    }
    base_box_ = aabb_of(base_);
}

Aabb Shape::effective_aabb() const {
    // Rounding is monotone, so shifting the extremes bounds every shifted vertex.
    return base_box_.translated(translation_);
}

std::vector<Point> Shape::effective_vertices() const {
    std::vector<Point> out;
    out.reserve(base_.size());
    for (const Point& p : base_) {
        out.push_back(p + translation_);
    }
    return out;
}

Point clamp_translation(const Shape& shape, Point proposed, const StageBounds& bounds) {
    if (!is_finite(proposed)) {
        throw Error(ErrorCode::invalid_argument, "non-finite translation");
    }
    const Aabb& box = shape.base_aabb();
    return {clamp_axis(proposed.x, box.min_x, box.max_x, bounds.width()),
            clamp_axis(proposed.y, box.min_y, box.max_y, bounds.height())};
}

Stage::Stage(StageBounds bounds, std::optional<std::string> background)
    : bounds_(bounds), background_(std::move(background)) {}

Stage Stage::from_layers(StageBounds bounds, std::vector<Layer> layers) {
    Stage stage(bounds);
    std::set<ShapeId> shape_ids;
    std::set<LayerId> layer_ids;
    const Aabb limit = bounds.box();
    for (const Layer& layer : layers) {
        if (layer.id == 0 || !layer_ids.insert(layer.id).second) {
            throw Error(ErrorCode::invalid_argument, "layer ids must be unique and nonzero");
        }
        for (const Shape& s : layer.shapes) {
            if (s.id() == 0 || !shape_ids.insert(s.id()).second) {
                throw Error(ErrorCode::invalid_argument, "shape ids must be unique and nonzero");
            }
            if (!is_finite(s.translation()) || !limit.contains(s.effective_aabb())) {
                throw Error(ErrorCode::containment_violation, "document violates containment");
            }
        }
    }
    stage.next_shape_id_ = shape_ids.empty() ? 1 : *shape_ids.rbegin() + 1;
    stage.next_layer_id_ = layer_ids.empty() ? 1 : *layer_ids.rbegin() + 1;
    stage.layers_ = std::move(layers);
    return stage;
}

std::size_t Stage::shape_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers_) {
        n += l.shapes.size();
    }
    return n;
}

std::optional<Stage::Location> Stage::locate(ShapeId id) const {
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        const auto& shapes = layers_[li].shapes;
        for (std::size_t si = 0; si < shapes.size(); ++si) {
            if (shapes[si].id() == id) {
                return Location{li, si};
            }
        }
    }
    return std::nullopt;
}

Stage::Location Stage::require(ShapeId id) const {
    auto loc = locate(id);
    if (!loc) {
        throw Error(ErrorCode::no_such_shape, "no such shape");
    }
    return *loc;
}

const Shape* Stage::find(ShapeId id) const {
    auto loc = locate(id);
    return loc ? &layers_[loc->layer].shapes[loc->index] : nullptr;
}

const Shape& Stage::shape(ShapeId id) const {
    auto loc = require(id);
    return layers_[loc.layer].shapes[loc.index];
}

void Stage::check_mutable() const {
    if (notifying_) {
        throw Error(ErrorCode::reentrant_mutation, "stage mutated from inside a change observer");
    }
}

void Stage::check_vertex(Point pt) const {
    if (!is_finite(pt) || !bounds_.box().contains(pt)) {
        throw Error(ErrorCode::out_of_bounds, "vertex out of bounds");
    }
}

Layer& Stage::target_layer(std::optional<LayerId> layer) {
    if (layer) {
        auto it = std::find_if(layers_.begin(), layers_.end(), [&](const Layer& l) { return l.id == *layer; });
        if (it == layers_.end()) {
            throw Error(ErrorCode::invalid_argument, "no such layer");
        }
        return *it;
    }
    if (layers_.empty()) {
        layers_.push_back(Layer{next_layer_id_++, {}});
    }
    return layers_.back();
}

void Stage::commit(ChangeKind kind, ShapeId shape) {
    ++version_;
    if (observers_.empty()) {
        return;
    }
    const ChangeEvent event{version_, kind, shape};
    auto observers = observers_; // observers may unsubscribe while we iterate
    notifying_ = true;
    try {
        for (auto& [id, observer] : observers) {
            observer(event);
        }
    } catch (...) {
        notifying_ = false;
        throw;
    }
    notifying_ = false;
}

LayerId Stage::add_layer() {
    check_mutable();
    const LayerId id = next_layer_id_++;
    layers_.push_back(Layer{id, {}});
    commit(ChangeKind::order_changed, 0);
    return id;
}

void Stage::begin_polygon(std::string style, std::optional<LayerId> layer) {
    check_mutable();
    builder_ = Builder{std::move(style), layer, {}};
}

void Stage::add_vertex(Point pt) {
    check_mutable();
    if (!builder_) {
        throw Error(ErrorCode::no_polygon_in_progress, "no polygon in progress");
    }
    check_vertex(pt);
    if (!builder_->vertices.empty() && builder_->vertices.back() == pt) {
        throw Error(ErrorCode::duplicate_vertex, "duplicate vertex");
    }
    builder_->vertices.push_back(pt);
}

ShapeId Stage::close_polygon() {
    check_mutable();
    if (!builder_) {
        throw Error(ErrorCode::no_polygon_in_progress, "no polygon in progress");
    }
    if (builder_->vertices.size() < 3) {
        throw Error(ErrorCode::degenerate_polygon, "degenerate polygon");
    }
    Builder b = std::move(*builder_);
    builder_.reset();
    return insert(ShapeKind::polygon, std::move(b.vertices), std::move(b.style), b.layer);
}

void Stage::cancel_polygon() {
    check_mutable();
    builder_.reset();
}

std::span<const Point> Stage::pending_vertices() const {
    if (!builder_) {
        return {};
    }
    return builder_->vertices;
}

ShapeId Stage::add_polygon(std::vector<Point> vertices, std::string style, std::optional<LayerId> layer) {
    check_mutable();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        check_vertex(vertices[i]);
        if (i > 0 && vertices[i] == vertices[i - 1]) {
            throw Error(ErrorCode::duplicate_vertex, "duplicate vertex");
        }
    }
    return insert(ShapeKind::polygon, std::move(vertices), std::move(style), layer);
}

ShapeId Stage::add_rectangle(Point top_left, double width, double height, std::string style,
                             std::optional<LayerId> layer) {
    check_mutable();
    if (!(std::isfinite(width) && std::isfinite(height) && width > 0.0 && height > 0.0)) {
        throw Error(ErrorCode::degenerate_polygon, "degenerate polygon");
    }
    std::vector<Point> corners{top_left,
                               {top_left.x + width, top_left.y},
                               {top_left.x + width, top_left.y + height},
                               {top_left.x, top_left.y + height}};
    for (const Point& c : corners) {
        check_vertex(c);
    }
    return insert(ShapeKind::rectangle, std::move(corners), std::move(style), layer);
}

ShapeId Stage::insert(ShapeKind kind, std::vector<Point> vertices, std::string style, std::optional<LayerId> layer) {
    Shape shape(next_shape_id_, kind, std::move(vertices), std::move(style));
    Layer& target = target_layer(layer);
    target.shapes.push_back(std::move(shape));
    const ShapeId id = next_shape_id_++;
    commit(ChangeKind::shape_added, id);
    return id;
}

Point Stage::drag(ShapeId id, Point proposed_translation) {
    check_mutable();
    const Location loc = require(id);
    Shape& s = layers_[loc.layer].shapes[loc.index];
    const Point applied = clamp_translation(s, proposed_translation, bounds_);
    s.translation_ = applied;
    commit(ChangeKind::shape_moved, id);
    return applied;
}

void Stage::remove_shape(ShapeId id) {
    check_mutable();
    const Location loc = require(id);
    auto& shapes = layers_[loc.layer].shapes;
    shapes.erase(shapes.begin() + static_cast<std::ptrdiff_t>(loc.index));
    commit(ChangeKind::shape_removed, id);
}

void Stage::move_shape_to_top(ShapeId id) {
    check_mutable();
    const Location loc = require(id);
    auto& shapes = layers_[loc.layer].shapes;
    std::rotate(shapes.begin() + static_cast<std::ptrdiff_t>(loc.index),
                shapes.begin() + static_cast<std::ptrdiff_t>(loc.index) + 1, shapes.end());
    commit(ChangeKind::order_changed, id);
}

std::optional<ShapeId> Stage::hit_test(Point pt) const {
    if (!is_finite(pt)) {
        return std::nullopt;
    }
    for (auto layer = layers_.rbegin(); layer != layers_.rend(); ++layer) {
        for (auto s = layer->shapes.rbegin(); s != layer->shapes.rend(); ++s) {
            // Box reject, widened by the edge tolerance.
            const Aabb b = s->effective_aabb();
            if (pt.x < b.min_x - kEdgeEpsilon || pt.x > b.max_x + kEdgeEpsilon || pt.y < b.min_y - kEdgeEpsilon ||
                pt.y > b.max_y + kEdgeEpsilon) {
                continue;
            }
            if (point_in_polygon(pt, s->effective_vertices())) {
                return s->id();
            }
        }
    }
    return std::nullopt;
}

Stage::SubscriptionId Stage::subscribe(Observer observer) {
    const SubscriptionId id = next_subscription_++;
    observers_.emplace_back(id, std::move(observer));
    return id;
}

void Stage::unsubscribe(SubscriptionId id) {
    std::erase_if(observers_, [id](const auto& entry) { return entry.first == id; });
}

} // namespace shapestage
