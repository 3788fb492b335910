#include "pam/datasets.hpp"

#include <array>

namespace pam::data {

namespace {

// One hundred common 4-letter English words, one per line.
constexpr std::array<std::string_view, 100> kWords = {
    "that", "with", "they", "have", "this", "from", "word", "what", "some", "were",
    "when", "your", "said", "each", "time", "will", "many", "then", "them", "like",
    "long", "make", "look", "more", "come", "most", "over", "know", "than", "call",
    "down", "side", "been", "find", "work", "part", "take", "made", "live", "back",
    "only", "year", "came", "show", "good", "give", "name", "very", "just", "form",
    "help", "line", "turn", "much", "mean", "move", "same", "tell", "does", "want",
    "well", "also", "play", "home", "read", "hand", "port", "even", "land", "here",
    "must", "high", "such", "went", "kind", "need", "near", "self", "head", "page",
    "grow", "food", "four", "keep", "last", "city", "tree", "farm", "hard", "draw",
    "left", "late", "real", "life", "open", "seem", "next", "walk", "ease", "both",
};

} // namespace

std::span<const std::string_view> word_list() {
    return kWords;
}

} // namespace pam::data
