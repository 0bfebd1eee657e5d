#include "semcom/scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

int Vocabulary::size_level_index(int size) const {
    for (int i = 0; i < size_count(); ++i)
        if (size_levels[static_cast<std::size_t>(i)] == size) return i;
    return -1;
}

void Vocabulary::validate() const {
    if (class_labels.empty()) throw ConfigError("vocabulary: no class labels");
    std::set<std::string> seen(class_labels.begin(), class_labels.end());
    if (seen.size() != class_labels.size())
        throw ConfigError("vocabulary: duplicate class labels");
    if (color_palette.empty()) throw ConfigError("vocabulary: empty color palette");
    if (size_levels.empty()) throw ConfigError("vocabulary: empty size levels");
    if (canvas_height <= 0 || canvas_width <= 0)
        throw ConfigError("vocabulary: canvas must be positive");
    const int limit = std::min(canvas_height, canvas_width);
    for (int s : size_levels)
        if (s <= 0 || s > limit)
            throw ConfigError("vocabulary: size level outside canvas");
    if (!std::is_sorted(size_levels.begin(), size_levels.end()))
        throw ConfigError("vocabulary: size levels must ascend");
    if (version < 1) throw ConfigError("vocabulary: version must be >= 1");
}

Vocabulary default_vocabulary(int canvas_height, int canvas_width) {
    Vocabulary v;
    v.class_labels = {"bear", "tree", "rock", "cloud", "house",
                      "bird", "bush", "lake", "path", "hill"};
    v.color_palette = {"black", "slate", "gray", "silver", "pearl", "white"};
    v.size_levels = {1, 2, 3, 4};
    v.canvas_height = canvas_height;
    v.canvas_width = canvas_width;
    v.version = 1;
    return v;
}

void Scene::validate(const Vocabulary& vocab) const {
    if (canvas_height != vocab.canvas_height || canvas_width != vocab.canvas_width)
        throw ConfigError("scene: canvas disagrees with vocabulary");
    std::set<int> ids;
    for (const auto& o : objects) {
        if (!ids.insert(o.id).second) throw ConfigError("scene: duplicate object id");
        if (o.class_id < 0 || o.class_id >= vocab.class_count())
            throw ConfigError("scene: class outside vocabulary");
        if (o.color < 0 || o.color >= vocab.color_count())
            throw ConfigError("scene: color outside palette");
        if (vocab.size_level_index(o.size) < 0)
            throw ConfigError("scene: size not a vocabulary level");
        if (o.row < 0 || o.col < 0 || o.row + o.size > canvas_height ||
            o.col + o.size > canvas_width)
            throw ConfigError("scene: object outside canvas");
    }
}

std::uint8_t ladder_luminance(int color_index) {
    const int rung = ((color_index % 16) + 16) % 16;
    return static_cast<std::uint8_t>((rung * 255 + 7) / 15);
}

Scene generate_scene(std::uint64_t seed, int object_count, const Vocabulary& vocab) {
    vocab.validate();
    if (object_count < 0) throw ConfigError("generate_scene: negative count");
    const long long capacity =
        static_cast<long long>(vocab.canvas_height) * vocab.canvas_width;
    if (object_count > capacity)
        throw CapacityError("generate_scene: object count exceeds canvas capacity");

    Scene scene;
    scene.canvas_height = vocab.canvas_height;
    scene.canvas_width = vocab.canvas_width;

    auto eng = make_engine(derive_seed(seed, 0x5Cu, static_cast<std::uint64_t>(object_count)));
    scene.background = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.color_count())));

    std::set<std::tuple<int, int, int>> taken;  // (class, row, col)
    long long attempts = 0;
    const long long attempt_cap = 1000 + 64LL * object_count;
    while (static_cast<int>(scene.objects.size()) < object_count) {
        if (++attempts > attempt_cap)
            throw CapacityError("generate_scene: could not place objects without collision");
        SceneObject o;
        o.id = static_cast<int>(scene.objects.size());
        o.class_id = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.class_count())));
        o.size = vocab.size_levels[next_below(eng, static_cast<std::uint64_t>(vocab.size_count()))];
        o.row = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.canvas_height - o.size + 1)));
        o.col = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.canvas_width - o.size + 1)));
        o.color = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.color_count())));
        if (!taken.insert({o.class_id, o.row, o.col}).second) continue;
        scene.objects.push_back(o);
    }
    return scene;
}

Image render(const Scene& scene, int height, int width) {
    if (height <= 0 || width <= 0) throw ConfigError("render: non-positive resolution");
    Image img;
    img.height = height;
    img.width = width;
    img.pixels.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width),
                      ladder_luminance(scene.background));

    std::vector<const SceneObject*> order;
    order.reserve(scene.objects.size());
    for (const auto& o : scene.objects) order.push_back(&o);
    std::sort(order.begin(), order.end(),
              [](const SceneObject* a, const SceneObject* b) { return a->id < b->id; });

    for (const SceneObject* o : order) {
        const int y0 = static_cast<int>(static_cast<long long>(o->row) * height / scene.canvas_height);
        const int y1 = static_cast<int>(static_cast<long long>(o->row + o->size) * height / scene.canvas_height);
        const int x0 = static_cast<int>(static_cast<long long>(o->col) * width / scene.canvas_width);
        const int x1 = static_cast<int>(static_cast<long long>(o->col + o->size) * width / scene.canvas_width);
        const std::uint8_t lum = ladder_luminance(o->color);
        for (int y = std::max(0, y0); y < std::min(height, y1); ++y) {
            auto* row = img.pixels.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
            for (int x = std::max(0, x0); x < std::min(width, x1); ++x) row[x] = lum;
        }
    }
    return img;
}

std::map<int, int> scene_object_multiset(const Scene& scene) {
    std::map<int, int> counts;
    for (const auto& o : scene.objects) ++counts[o.class_id];
    return counts;
}

double object_salience(const SceneObject& obj) {
    // size weighted by its footprint area
    const double s = static_cast<double>(obj.size);
    return s * s * s;
}

std::string serialize_scene(const Scene& scene, const Vocabulary& vocab) {
    scene.validate(vocab);
    std::vector<const SceneObject*> order;
    order.reserve(scene.objects.size());
    for (const auto& o : scene.objects) order.push_back(&o);
    std::sort(order.begin(), order.end(),
              [](const SceneObject* a, const SceneObject* b) { return a->id < b->id; });

    std::ostringstream out;
    out << "scene " << scene.canvas_height << ' ' << scene.canvas_width << ' '
        << vocab.color_palette[static_cast<std::size_t>(scene.background)] << ' '
        << scene.objects.size() << '\n';
    for (const SceneObject* o : order) {
        out << o->id << ' ' << vocab.class_labels[static_cast<std::size_t>(o->class_id)] << ' '
            << o->row << ' ' << o->col << ' ' << o->size << ' '
            << vocab.color_palette[static_cast<std::size_t>(o->color)] << '\n';
    }
    return out.str();
}

namespace {

int lookup(const std::vector<std::string>& names, const std::string& s, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == s) return static_cast<int>(i);
    throw ConfigError(std::string("parse_scene: unknown ") + what + " '" + s + "'");
}

Scene parse_scene_stream(std::istream& in, const Vocabulary& vocab) {
    std::string tag;
    if (!(in >> tag)) throw ConfigError("parse_scene: empty input");
    if (tag != "scene") throw ConfigError("parse_scene: expected 'scene' header");
    Scene scene;
    std::string bg;
    std::size_t count = 0;
    if (!(in >> scene.canvas_height >> scene.canvas_width >> bg >> count))
        throw ConfigError("parse_scene: malformed header");
    scene.background = lookup(vocab.color_palette, bg, "color");
    scene.objects.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SceneObject o;
        std::string cls, color;
        if (!(in >> o.id >> cls >> o.row >> o.col >> o.size >> color))
            throw ConfigError("parse_scene: truncated object line");
        o.class_id = lookup(vocab.class_labels, cls, "class");
        o.color = lookup(vocab.color_palette, color, "color");
        scene.objects.push_back(o);
    }
    scene.validate(vocab);
    return scene;
}

}  // namespace

Scene parse_scene(const std::string& text, const Vocabulary& vocab) {
    std::istringstream in(text);
    return parse_scene_stream(in, vocab);
}

std::string serialize_corpus(const std::vector<Scene>& scenes, const Vocabulary& vocab) {
    std::string out;
    for (const auto& s : scenes) out += serialize_scene(s, vocab);
    return out;
}

std::vector<Scene> parse_corpus(const std::string& text, const Vocabulary& vocab) {
    std::istringstream in(text);
    std::vector<Scene> scenes;
    while (true) {
        in >> std::ws;
        if (in.peek() == std::char_traits<char>::eof()) break;
        scenes.push_back(parse_scene_stream(in, vocab));
    }
    return scenes;
}

}  // namespace semcom
