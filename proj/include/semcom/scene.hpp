#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace semcom {

/// Shared content domain: object classes, attribute value sets and the
/// canvas geometry both endpoints agree on. Versioned so encoder/decoder
/// equivalence can be checked.
struct Vocabulary {
    std::vector<std::string> class_labels;
    std::vector<std::string> color_palette;
    std::vector<int> size_levels;  // object edge lengths in grid cells, ascending
    int canvas_height = 16;
    int canvas_width = 16;
    int version = 1;

    int class_count() const { return static_cast<int>(class_labels.size()); }
    int color_count() const { return static_cast<int>(color_palette.size()); }
    int size_count() const { return static_cast<int>(size_levels.size()); }

    /// Index of a size value in size_levels, -1 if absent.
    int size_level_index(int size) const;

    void validate() const;  // throws ConfigError
};

Vocabulary default_vocabulary(int canvas_height = 16, int canvas_width = 16);

struct SceneObject {
    int id = 0;
    int class_id = 0;
    int row = 0;  // top-left, grid cells
    int col = 0;
    int size = 1;   // edge length, one of Vocabulary::size_levels
    int color = 0;  // palette index

    bool operator==(const SceneObject&) const = default;
};

/// The content unit at semantic level: a canvas of colored rectangles.
struct Scene {
    int canvas_height = 16;
    int canvas_width = 16;
    int background = 0;  // color index
    std::vector<SceneObject> objects;

    void validate(const Vocabulary& vocab) const;  // throws ConfigError

    bool operator==(const Scene&) const = default;
};

struct Image {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels;  // row-major luminance

    std::uint8_t at(int r, int c) const {
        return pixels[static_cast<std::size_t>(r) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(c)];
    }

    bool operator==(const Image&) const = default;
};

// Color indices map onto a fixed 16-rung luminance ladder so rendering does
// not depend on the vocabulary in use.
std::uint8_t ladder_luminance(int color_index);

/// Deterministic corpus generator. No two objects share (class_id, position).
Scene generate_scene(std::uint64_t seed, int object_count, const Vocabulary& vocab);

/// Rasterizes a scene; objects painted as filled rectangles in ascending id
/// order, later ids overdraw.
Image render(const Scene& scene, int height, int width);

/// class_id -> multiplicity
std::map<int, int> scene_object_multiset(const Scene& scene);

double object_salience(const SceneObject& obj);

// Canonical text format, byte-stable: a header line
//   scene <H> <W> <background-color> <count>
// then one object per line: id, class label, row, col, size, color.
std::string serialize_scene(const Scene& scene, const Vocabulary& vocab);
Scene parse_scene(const std::string& text, const Vocabulary& vocab);

std::string serialize_corpus(const std::vector<Scene>& scenes, const Vocabulary& vocab);
std::vector<Scene> parse_corpus(const std::string& text, const Vocabulary& vocab);

}  // namespace semcom
