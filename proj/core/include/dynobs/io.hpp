#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "dynobs/automaton.hpp"
#include "dynobs/mean_payoff.hpp"
#include "dynobs/observer.hpp"
#include "dynobs/synthesis.hpp"

namespace dynobs {

enum class ModelKind { kPlant, kObserver, kMpo, kGame };

std::string_view kind_name(ModelKind kind);

struct ModelDocument {
  ModelKind kind = ModelKind::kPlant;
  std::variant<Plant, Observer, MostPermissiveObserver, WeightedGraphGame> body;
};

/// Parses any model kind. Throws InputError with a line number on malformed
/// input and on observers that fail validation.
ModelDocument parse_model(std::string_view text);

/// Parses an observer without validating it, so that every violation can
/// be reported.
ObserverDraft parse_observer_draft(std::string_view text);

/// Reads and parses a file. Throws InputError when it cannot be read.
ModelDocument read_model_file(const std::string& path);
std::string read_text_file(const std::string& path);

/// Canonical text form; parse_model(serialize(m)) == m.
std::string serialize(const Automaton& plant);
std::string serialize(const Observer& obs);
std::string serialize(const MostPermissiveObserver& mpo);
std::string serialize(const WeightedGraphGame& game);
std::string serialize(const ModelDocument& doc);

/// Deterministic Graphviz rendering.
std::string export_dot(const Automaton& a);
std::string export_dot(const Observer& obs);
std::string export_dot(const MostPermissiveObserver& mpo);
std::string export_dot(const WeightedGraphGame& game);
std::string export_dot(const ModelDocument& doc);

}  // namespace dynobs
