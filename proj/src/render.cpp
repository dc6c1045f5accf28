#include "shapestage/render.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "shapestage/error.hpp"

namespace shapestage {

Framebuffer::Framebuffer(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorCode::invalid_argument, "framebuffer dimensions must be positive");
    }
    data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

Rgb Framebuffer::at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
}

void Framebuffer::set(int x, int y, Rgb c) {
    const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
}

void Framebuffer::fill_span(int y, int x0, int x1, Rgb c) {
    std::uint8_t* row = data_.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) * 3;
    for (int x = x0; x < x1; ++x) {
        std::uint8_t* px = row + static_cast<std::size_t>(x) * 3;
        px[0] = c.r;
        px[1] = c.g;
        px[2] = c.b;
    }
}

namespace {

double centre(int i) { return static_cast<double>(i) + 0.5; }

// Smallest pixel index whose centre is >= x, clamped to [0, limit].
int first_centre_at_or_after(double x, int limit) {
    if (x <= 0.5) {
        return 0;
    }
    if (x > centre(limit - 1)) {
        return limit;
    }
    int i = static_cast<int>(std::floor(x - 0.5));
    while (i > 0 && centre(i - 1) >= x) {
        --i;
    }
    while (i < limit && centre(i) < x) {
        ++i;
    }
    return i;
}

// Pixels whose centres lie within the edge tolerance of a segment are inside
// regardless of parity. Candidates are the centres in the segment's box
// grown by the tolerance; the exact test is the shared predicate.
void fill_edge_band(Framebuffer& fb, Point a, Point b, Rgb color) {
    const double eps = 2 * kEdgeEpsilon; // slack over the predicate's rounding
    const double lo_y = std::min(a.y, b.y) - eps;
    const double hi_y = std::max(a.y, b.y) + eps;
    const int row0 = first_centre_at_or_after(lo_y, fb.height());
    for (int row = row0; row < fb.height() && centre(row) <= hi_y; ++row) {
        const double yc = centre(row);
        // x extent of the segment inside the slab |y - yc| <= eps.
        double x_lo = std::min(a.x, b.x);
        double x_hi = std::max(a.x, b.x);
        if (a.y != b.y) {
            const double t0 = std::clamp((yc - eps - a.y) / (b.y - a.y), 0.0, 1.0);
            const double t1 = std::clamp((yc + eps - a.y) / (b.y - a.y), 0.0, 1.0);
            const double xa = a.x + t0 * (b.x - a.x);
            const double xb = a.x + t1 * (b.x - a.x);
            x_lo = std::max(x_lo, std::min(xa, xb));
            x_hi = std::min(x_hi, std::max(xa, xb));
        }
        // Generous margin: the predicate below decides.
        const double margin = eps + 1e-9 * std::max(1.0, std::abs(x_hi));
        int col = first_centre_at_or_after(x_lo - margin, fb.width());
        for (; col < fb.width() && centre(col) <= x_hi + margin; ++col) {
            if (detail::near_segment({centre(col), yc}, a, b)) {
                fb.set(col, row, color);
            }
        }
    }
}

} // namespace

void fill_polygon(Framebuffer& fb, std::span<const Point> vertices, Rgb color) {
    if (vertices.size() < 3) {
        throw Error(ErrorCode::degenerate_polygon, "degenerate polygon");
    }
    const Aabb box = aabb_of(vertices);
    const int row0 = first_centre_at_or_after(box.min_y, fb.height());
    std::vector<double> crossings;
    for (int row = row0; row < fb.height() && centre(row) <= box.max_y; ++row) {
        const double yc = centre(row);
        crossings.clear();
        Point prev = vertices.back();
        for (const Point& cur : vertices) {
            if (detail::edge_straddles(prev, cur, yc)) {
                crossings.push_back(detail::edge_crossing_x(prev, cur, yc));
            }
            prev = cur;
        }
        std::sort(crossings.begin(), crossings.end());
        // Centre xc is inside iff an odd number of crossings lie strictly to
        // its right, i.e. xc in [c[2k], c[2k+1]).
        for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
            const int x0 = first_centre_at_or_after(crossings[k], fb.width());
            const int x1 = first_centre_at_or_after(crossings[k + 1], fb.width());
            if (x0 < x1) {
                fb.fill_span(row, x0, x1, color);
            }
        }
    }
    Point prev = vertices.back();
    for (const Point& cur : vertices) {
        fill_edge_band(fb, prev, cur, color);
        prev = cur;
    }
}

namespace {

void stamp(Framebuffer& fb, int x, int y, int width, Rgb color) {
    const int x0 = std::max(0, x - (width - 1) / 2);
    const int y0 = std::max(0, y - (width - 1) / 2);
    const int x1 = std::min(fb.width(), x + width / 2 + 1);
    const int y1 = std::min(fb.height(), y + width / 2 + 1);
    for (int yy = y0; yy < y1; ++yy) {
        if (x0 < x1) {
            fb.fill_span(yy, x0, x1, color);
        }
    }
}

int pixel_of(double v) {
    // Coordinates are bounded by the stage, so the cast cannot overflow.
    return static_cast<int>(std::floor(v));
}

} // namespace

void stroke_polygon(Framebuffer& fb, std::span<const Point> vertices, Rgb color, int width) {
    if (width <= 0 || vertices.empty()) {
        return;
    }
    Point prev = vertices.back();
    for (const Point& cur : vertices) {
        int x0 = pixel_of(prev.x);
        int y0 = pixel_of(prev.y);
        const int x1 = pixel_of(cur.x);
        const int y1 = pixel_of(cur.y);
        const int dx = std::abs(x1 - x0);
        const int dy = -std::abs(y1 - y0);
        const int sx = x0 < x1 ? 1 : -1;
        const int sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        for (;;) {
            stamp(fb, x0, y0, width, color);
            if (x0 == x1 && y0 == y1) {
                break;
            }
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
        prev = cur;
    }
}

Framebuffer render(const Stage& stage, const StyleTable& styles, const Background& background) {
    const int w = stage.bounds().width();
    const int h = stage.bounds().height();
    Framebuffer fb = std::visit(
        [&](const auto& bg) -> Framebuffer {
            if constexpr (std::is_same_v<std::decay_t<decltype(bg)>, Rgb>) {
                return Framebuffer(w, h, bg);
            } else {
                if (bg.width() != w || bg.height() != h) {
                    throw Error(ErrorCode::invalid_argument, "background size does not match the stage");
                }
                return bg;
            }
        },
        background);

    // Resolve every style before drawing so a failure leaves nothing half done.
    std::vector<std::pair<const Shape*, const Style*>> plan;
    plan.reserve(stage.shape_count());
    for (const Layer& layer : stage.layers()) {
        for (const Shape& s : layer.shapes) {
            auto it = styles.find(s.style());
            if (it == styles.end()) {
                throw Error(ErrorCode::unknown_style, "unknown style \"" + s.style() + "\"");
            }
            plan.emplace_back(&s, &it->second);
        }
    }
    std::vector<Point> vs;
    for (const auto& [shape, style] : plan) {
        vs = shape->effective_vertices();
        fill_polygon(fb, vs, style->fill);
        stroke_polygon(fb, vs, style->stroke, style->stroke_width);
    }
    return fb;
}

void write_ppm(const Framebuffer& fb, std::ostream& out) {
    out << "P6\n" << fb.width() << ' ' << fb.height() << "\n255\n";
    const auto bytes = fb.bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::io_failure, "failed to write image");
    }
}

namespace {

[[noreturn]] void bad_image(const char* why) { throw Error(ErrorCode::malformed_image, std::string("malformed image: ") + why); }

void skip_space_and_comments(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            while (in && in.get() != '\n') {
            }
        } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            in.get();
        } else {
            return;
        }
    }
}

long read_header_int(std::istream& in) {
    skip_space_and_comments(in);
    long v = 0;
    int digits = 0;
    while (std::isdigit(in.peek())) {
        v = v * 10 + (in.get() - '0');
        if (++digits > 9) {
            bad_image("header value too large");
        }
    }
    if (digits == 0) {
        bad_image("expected a number in the header");
    }
    return v;
}

} // namespace

Framebuffer read_ppm(std::istream& in) {
    char magic[2] = {};
    if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '6') {
        bad_image("missing P6 magic");
    }
    const long w = read_header_int(in);
    const long h = read_header_int(in);
    const long maxval = read_header_int(in);
    if (w <= 0 || h <= 0) {
        bad_image("non-positive dimensions");
    }
    if (w * h > (1L << 28)) {
        bad_image("dimensions too large");
    }
    if (maxval != 255) {
        bad_image("only maxval 255 is supported");
    }
    const int sep = in.get();
    if (sep != ' ' && sep != '\t' && sep != '\n' && sep != '\r') {
        bad_image("missing separator before pixel data");
    }
    Framebuffer fb(static_cast<int>(w), static_cast<int>(h));
    auto bytes = fb.bytes();
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
        bad_image("truncated pixel data");
    }
    return fb;
}

} // namespace shapestage
