#pragma once

#include "chirono/chart_model.hpp"
#include "chirono/trace.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#ifndef CHIRONO_TEST_DATA
#error "CHIRONO_TEST_DATA must point at tests/data"
#endif
#ifndef CHIRONO_GOLDEN_DIR
#error "CHIRONO_GOLDEN_DIR must point at tests/golden"
#endif

namespace chirono::testing {

inline std::string data_path(const std::string& rel) { return std::string(CHIRONO_TEST_DATA) + "/" + rel; }
inline std::string golden_path(const std::string& rel) { return std::string(CHIRONO_GOLDEN_DIR) + "/" + rel; }

inline std::shared_ptr<const Deck> study_deck() {
    static const auto deck = std::make_shared<const Deck>(load_deck(data_path("deck.json")));
    return deck;
}

inline std::size_t scene_of(const Deck& deck, std::string_view id) {
    for (std::size_t i = 0; i < deck.scenes.size(); ++i) {
        if (deck.scenes[i].id == id) return i;
    }
    return deck.scenes.size();
}

/// Names of the committed regression traces, sorted.
inline std::vector<std::string> corpus_names() {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(data_path("traces"))) {
        if (e.path().extension() == ".jsonl") names.push_back(e.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace chirono::testing
