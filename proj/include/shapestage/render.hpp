#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "shapestage/scene.hpp"

namespace shapestage {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Style {
    Rgb fill;
    Rgb stroke;
    int stroke_width = 0; // square brush side in pixels; 0 disables the outline
};

using StyleTable = std::map<std::string, Style, std::less<>>;

/// Row-major RGB pixel grid.
class Framebuffer {
public:
    Framebuffer(int width, int height, Rgb fill = {255, 255, 255});

    int width() const { return width_; }
    int height() const { return height_; }

    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb c);
    /// Fills pixels [x0, x1) on row y; the caller clips.
    void fill_span(int y, int x0, int x1, Rgb c);

    std::span<const std::uint8_t> bytes() const { return data_; }
    std::span<std::uint8_t> bytes() { return data_; }

    friend bool operator==(const Framebuffer&, const Framebuffer&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

using Background = std::variant<Rgb, Framebuffer>;

/// Paints layers bottom-up, shapes bottom-up: even-odd fill sampled at pixel
/// centres, then a Bresenham outline thickened by a square brush.
///
/// A covered pixel is exactly one whose centre satisfies point_in_polygon on
/// the shape's effective vertices. A raster background must match the stage
/// size and is copied 1:1.
///
/// Throws Error(unknown_style) when a shape's style is missing from the table
/// and Error(invalid_argument) on a background size mismatch.
Framebuffer render(const Stage& stage, const StyleTable& styles, const Background& background = Rgb{255, 255, 255});

/// Fills one polygon into the framebuffer (clipped). Exposed for tests.
void fill_polygon(Framebuffer& fb, std::span<const Point> vertices, Rgb color);
void stroke_polygon(Framebuffer& fb, std::span<const Point> vertices, Rgb color, int width);

/// Binary P6: "P6\n<w> <h>\n255\n" followed by raw RGB triples.
void write_ppm(const Framebuffer& fb, std::ostream& out);
/// Throws Error(malformed_image) on a bad header or short payload.
Framebuffer read_ppm(std::istream& in);

} // namespace shapestage
