#include "semcom/gai.hpp"

#include <algorithm>
#include <cmath>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

int identify_goal(std::string_view service_kind) {
    if (service_kind == "image-delivery") return kGoalDeliverImage;
    if (service_kind == "summary-delivery") return kGoalDeliverSummary;
    throw ConfigError("identify_goal: unknown service kind '" + std::string(service_kind) + "'");
}

KnowledgeBase make_knowledge_base(const Vocabulary& vocab, std::uint64_t seed) {
    vocab.validate();
    KnowledgeBase kb;
    kb.vocab = vocab;
    kb.version = vocab.version;
    auto eng = make_engine(derive_seed(seed, 0x4B17u));
    kb.background_prior = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.color_count())));
    for (int c = 0; c < vocab.class_count(); ++c) {
        const int color = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.color_count())));
        const int size_level = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.size_count())));
        kb.attribute_priors[c] = {color, size_level};
    }
    return kb;
}

UserProfile make_user_profile(int user_id, const Vocabulary& vocab, std::uint64_t seed) {
    UserProfile profile;
    profile.user_id = user_id;
    auto eng = make_engine(derive_seed(seed, 0xB4A9u, static_cast<std::uint64_t>(user_id)));
    for (int c = 0; c < vocab.class_count(); ++c) {
        if (next_below(eng, 2) == 0) continue;
        const int color = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.color_count())));
        const int size_level = static_cast<int>(next_below(eng, static_cast<std::uint64_t>(vocab.size_count())));
        profile.preference[c] = {color, size_level};
    }
    return profile;
}

Prompt extract_keywords(const Scene& scene, const UserProfile& profile, int k,
                        const Vocabulary& vocab) {
    (void)profile;  // extraction rule is profile-independent; kept for interface parity
    if (k < 1) throw ConfigError("extract_keywords: budget must be >= 1");

    std::map<int, double> salience;
    for (const auto& o : scene.objects) salience[o.class_id] += object_salience(o);

    std::vector<std::pair<int, double>> ranked(salience.begin(), salience.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    Prompt prompt;
    prompt.goal_token = kGoalDeliverImage;
    prompt.budget = k;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), ranked.size());
    for (std::size_t i = 0; i < take; ++i) {
        const int cls = ranked[i].first;
        const SceneObject* largest = nullptr;
        for (const auto& o : scene.objects) {
            if (o.class_id != cls) continue;
            if (!largest || o.size > largest->size || (o.size == largest->size && o.id < largest->id))
                largest = &o;
        }
        KeywordToken tok;
        tok.class_id = cls;
        const double cr = largest->row + largest->size / 2.0;
        const double cc = largest->col + largest->size / 2.0;
        tok.quadrant = (cr >= scene.canvas_height / 2.0 ? 2 : 0) + (cc >= scene.canvas_width / 2.0 ? 1 : 0);
        const int level = vocab.size_level_index(largest->size);
        tok.size_level = level < 0 ? 0 : level;
        prompt.keywords.push_back(tok);
    }
    return prompt;
}

Scene generate_content(const Prompt& prompt, const UserProfile& profile,
                       const KnowledgeBase& kb, std::uint64_t seed) {
    const Vocabulary& vocab = kb.vocab;
    Scene scene;
    scene.canvas_height = vocab.canvas_height;
    scene.canvas_width = vocab.canvas_width;
    scene.background = kb.background_prior;

    for (std::size_t i = 0; i < prompt.keywords.size(); ++i) {
        const KeywordToken& tok = prompt.keywords[i];
        if (tok.class_id < 0 || tok.class_id >= vocab.class_count())
            throw KnowledgeMismatchError("generate_content: keyword class outside vocabulary");
        if (tok.quadrant && (*tok.quadrant < 0 || *tok.quadrant > 3))
            throw KnowledgeMismatchError("generate_content: invalid quadrant token");
        if (tok.size_level && (*tok.size_level < 0 || *tok.size_level >= vocab.size_count()))
            throw KnowledgeMismatchError("generate_content: size level outside vocabulary");

        int color, size_level;
        if (auto it = profile.preference.find(tok.class_id); it != profile.preference.end()) {
            color = it->second.first;
            size_level = it->second.second;
        } else {
            auto pit = kb.attribute_priors.find(tok.class_id);
            if (pit == kb.attribute_priors.end())
                throw KnowledgeMismatchError("generate_content: no prior for keyword class");
            color = pit->second.first;
            size_level = pit->second.second;
        }

        SceneObject o;
        o.id = static_cast<int>(i);
        o.class_id = tok.class_id;
        o.color = color;
        o.size = vocab.size_levels[static_cast<std::size_t>(size_level)];

        const int H = scene.canvas_height, W = scene.canvas_width;
        int qr = H / 2, qc = W / 2;
        if (tok.quadrant) {
            qr = (*tok.quadrant & 2) ? 3 * H / 4 : H / 4;
            qc = (*tok.quadrant & 1) ? 3 * W / 4 : W / 4;
        }
        auto eng = make_engine(derive_seed(seed, 0x6E2Du, i));
        const int jr = static_cast<int>(next_below(eng, 5)) - 2;
        const int jc = static_cast<int>(next_below(eng, 5)) - 2;
        o.row = std::clamp(qr - o.size / 2 + jr, 0, H - o.size);
        o.col = std::clamp(qc - o.size / 2 + jc, 0, W - o.size);
        scene.objects.push_back(o);
    }
    return scene;
}

Scene calibrate(const Scene& decoded, const KnowledgeBase& kb, const UserProfile& profile) {
    const Vocabulary& vocab = kb.vocab;
    Scene out = decoded;
    for (auto& o : out.objects) {
        auto pit = kb.attribute_priors.find(o.class_id);
        if (pit == kb.attribute_priors.end()) continue;
        const int size_level = vocab.size_level_index(o.size);
        if (size_level < 0) continue;
        const bool off = std::abs(o.color - pit->second.first) > 1 ||
                         std::abs(size_level - pit->second.second) > 1;
        if (!off) continue;

        std::pair<int, int> target = pit->second;
        if (auto it = profile.preference.find(o.class_id); it != profile.preference.end())
            target = it->second;
        o.color = target.first;
        const int new_size = vocab.size_levels[static_cast<std::size_t>(target.second)];
        // size is adjusted only when it still fits at the fixed position
        if (o.row + new_size <= out.canvas_height && o.col + new_size <= out.canvas_width)
            o.size = new_size;
    }
    return out;
}

namespace {

int decimal_width(int max_value) {
    int w = 1;
    while (max_value >= 10) {
        max_value /= 10;
        ++w;
    }
    return w;
}

void append_decimal(std::string& out, int value, int width) {
    std::string s = std::to_string(value);
    out.append(static_cast<std::size_t>(width) - s.size(), '0');
    out += s;
}

int read_decimal(std::string_view text, std::size_t& pos, int width, int modulus) {
    long long v = 0;
    for (int i = 0; i < width; ++i) {
        int digit = 0;
        if (pos < text.size()) {
            const char c = text[pos];
            digit = (c >= '0' && c <= '9') ? c - '0'
                                           : static_cast<int>(static_cast<unsigned char>(c)) % 10;
        }
        v = v * 10 + digit;
        ++pos;
    }
    return modulus > 0 ? static_cast<int>(v % modulus) : static_cast<int>(v);
}

}  // namespace

std::size_t prompt_text_width(const Vocabulary& vocab, int k) {
    const int header_w = decimal_width(kGoalTokenCount * (k + 1) - 1);
    const int class_w = decimal_width(vocab.class_count() - 1);
    const int size_w = decimal_width(vocab.size_count() - 1);
    return static_cast<std::size_t>(header_w) +
           static_cast<std::size_t>(k) * static_cast<std::size_t>(class_w + 1 + size_w);
}

std::string prompt_to_text(const Prompt& prompt, const Vocabulary& vocab, int k) {
    if (static_cast<int>(prompt.keywords.size()) > k)
        throw ConfigError("prompt_to_text: more keywords than the budget");
    const int header_w = decimal_width(kGoalTokenCount * (k + 1) - 1);
    const int class_w = decimal_width(vocab.class_count() - 1);
    const int size_w = decimal_width(vocab.size_count() - 1);

    std::string out;
    append_decimal(out, prompt.goal_token * (k + 1) + static_cast<int>(prompt.keywords.size()),
                   header_w);
    for (const auto& tok : prompt.keywords) {
        append_decimal(out, tok.class_id, class_w);
        append_decimal(out, tok.quadrant.value_or(0), 1);
        append_decimal(out, tok.size_level.value_or(0), size_w);
    }
    return out;
}

Prompt prompt_from_text(std::string_view text, const Vocabulary& vocab, int k) {
    const int header_w = decimal_width(kGoalTokenCount * (k + 1) - 1);
    const int class_w = decimal_width(vocab.class_count() - 1);
    const int size_w = decimal_width(vocab.size_count() - 1);

    std::size_t pos = 0;
    const int header = read_decimal(text, pos, header_w, kGoalTokenCount * (k + 1));
    Prompt prompt;
    prompt.goal_token = header / (k + 1);
    prompt.budget = k;
    const int count = header % (k + 1);
    for (int i = 0; i < count; ++i) {
        KeywordToken tok;
        tok.class_id = read_decimal(text, pos, class_w, vocab.class_count());
        tok.quadrant = read_decimal(text, pos, 1, 4);
        tok.size_level = read_decimal(text, pos, size_w, vocab.size_count());
        prompt.keywords.push_back(tok);
    }
    return prompt;
}

}  // namespace semcom
