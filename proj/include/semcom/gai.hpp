#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semcom/scene.hpp"

namespace semcom {

// Goal vocabulary for the service kinds the network understands.
inline constexpr int kGoalDeliverImage = 0;
inline constexpr int kGoalDeliverSummary = 1;
inline constexpr int kGoalTokenCount = 2;

/// Maps a service kind name onto its goal token; unknown kinds are a
/// configuration error.
int identify_goal(std::string_view service_kind);

struct KeywordToken {
    int class_id = 0;
    std::optional<int> quadrant;    // 0=NW 1=NE 2=SW 3=SE
    std::optional<int> size_level;  // index into Vocabulary::size_levels

    bool operator==(const KeywordToken&) const = default;
};

/// Compact uplink message: a goal plus ranked keywords, bounded by the
/// extraction budget k.
struct Prompt {
    int goal_token = kGoalDeliverImage;
    std::vector<KeywordToken> keywords;
    int budget = 1;

    bool operator==(const Prompt&) const = default;
};

/// Per-user branch personalization: preferred attributes per class, a
/// bounded prompt history and collected feedback.
struct UserProfile {
    int user_id = 0;
    std::map<int, std::pair<int, int>> preference;  // class -> (color, size level)
    std::deque<Prompt> history;
    std::size_t history_capacity = 16;
    std::vector<double> feedback_scores;

    void remember(const Prompt& p) {
        history.push_back(p);
        while (history.size() > history_capacity) history.pop_front();
    }
};

/// Shared background knowledge: the vocabulary plus per-class attribute
/// priors. Version equality between endpoints is what "knowledge
/// equivalence" means here.
struct KnowledgeBase {
    Vocabulary vocab;
    std::map<int, std::pair<int, int>> attribute_priors;  // class -> (color, size level)
    int background_prior = 0;
    int version = 1;
};

/// Builds priors for every class, deterministically from the seed.
KnowledgeBase make_knowledge_base(const Vocabulary& vocab, std::uint64_t seed);

/// Seeded branch profile; holds preferences for roughly half the classes.
UserProfile make_user_profile(int user_id, const Vocabulary& vocab, std::uint64_t seed);

/// Salience-ranked keyword extraction: per-class salience is the sum of
/// size-weighted footprints, top-k classes win, ties go to the lower class
/// id. The quadrant and size level come from the class's largest instance.
Prompt extract_keywords(const Scene& scene, const UserProfile& profile, int k,
                        const Vocabulary& vocab);

/// Prompt-conditioned regeneration: one object per keyword, placed at the
/// token's quadrant center with seeded jitter; attributes come from the
/// user's preference when present, else the knowledge-base prior.
Scene generate_content(const Prompt& prompt, const UserProfile& profile,
                       const KnowledgeBase& kb, std::uint64_t seed);

/// Receiver-side attribute calibration: any object whose color or size sits
/// more than one ladder step from the class prior is pulled to the user
/// preference (or the prior). Classes and positions are never altered;
/// idempotent.
Scene calibrate(const Scene& decoded, const KnowledgeBase& kb, const UserProfile& profile);

// Wire form of a prompt: a digit string riding the same text alphabet as
// scene serializations. Field widths are decimal and derived from the
// vocabulary, so both endpoints agree on the layout.
std::string prompt_to_text(const Prompt& prompt, const Vocabulary& vocab, int k);
Prompt prompt_from_text(std::string_view text, const Vocabulary& vocab, int k);
std::size_t prompt_text_width(const Vocabulary& vocab, int k);

}  // namespace semcom
