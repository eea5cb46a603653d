#include "dynobs/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "dynobs/error.hpp"

namespace dynobs {
namespace {

constexpr int kFormatVersion = 1;

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(const Line& line, const std::string& msg) {
  throw InputError("line " + std::to_string(line.number) + ": " + msg);
}

void expect_args(const Line& line, std::size_t min, std::size_t max) {
  const std::size_t args = line.tokens.size() - 1;
  if (args < min || args > max) fail(line, "wrong number of arguments for '" + line.tokens[0] + "'");
}

bool reserved(std::string_view tok) {
  return tok == kEpsilonToken || tok == kFaultToken || tok == kUnobservableToken;
}

std::size_t parse_count(const Line& line, const std::string& tok) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      tok.size() > 9) {
    fail(line, "expected a non-negative integer, got '" + tok + "'");
  }
  return std::stoul(tok);
}

std::int64_t parse_int(const Line& line, const std::string& tok) {
  std::string_view body = tok;
  if (!body.empty() && body[0] == '-') body.remove_prefix(1);
  if (body.empty() || body.size() > 15 ||
      !std::all_of(body.begin(), body.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    fail(line, "expected an integer, got '" + tok + "'");
  }
  return std::stoll(tok);
}

// Shared header handling: kind line, version, alphabet, states, initial.
struct Header {
  std::string name;
  std::optional<Alphabet> alphabet;
  std::vector<std::string> states;
  std::map<std::string, StateId> state_index;
  std::optional<std::string> initial;
  const Line* initial_line = nullptr;
  const Line* states_line = nullptr;
};

// Returns true when the line was a header directive.
bool header_line(const Line& line, Header& h, bool with_states) {
  const auto& d = line.tokens[0];
  if (d == "version") {
    expect_args(line, 1, 1);
    if (line.tokens[1] != std::to_string(kFormatVersion)) fail(line, "unsupported format version " + line.tokens[1]);
    return true;
  }
  if (d == "alphabet") {
    if (h.alphabet) fail(line, "duplicate alphabet");
    std::vector<std::string> names(line.tokens.begin() + 1, line.tokens.end());
    for (const auto& n : names) {
      if (reserved(n)) fail(line, "reserved token '" + n + "' cannot be an event");
    }
    try {
      h.alphabet = Alphabet(names);
    } catch (const InputError& e) {
      fail(line, e.what());
    }
    return true;
  }
  if (with_states && d == "states") {
    if (h.states_line) fail(line, "duplicate states");
    h.states_line = &line;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
      const auto& n = line.tokens[i];
      if (reserved(n)) fail(line, "reserved token '" + n + "' cannot be a state");
      if (!h.state_index.emplace(n, static_cast<StateId>(h.states.size())).second) {
        fail(line, "duplicate state '" + n + "'");
      }
      h.states.push_back(n);
    }
    return true;
  }
  if (d == "initial") {
    expect_args(line, 1, 1);
    if (h.initial) fail(line, "duplicate initial");
    h.initial = line.tokens[1];
    h.initial_line = &line;
    return true;
  }
  return false;
}

StateId state_ref(const Line& line, const Header& h, const std::string& name) {
  auto it = h.state_index.find(name);
  if (it == h.state_index.end()) fail(line, "undeclared state '" + name + "'");
  return it->second;
}

unsigned event_ref(const Line& line, const Alphabet& a, const std::string& name) {
  if (reserved(name)) fail(line, "reserved token '" + name + "' is not allowed here");
  auto idx = a.find(name);
  if (!idx) fail(line, "undeclared event '" + name + "'");
  return *idx;
}

void finish_header(const std::vector<Line>& lines, Header& h, bool with_states) {
  const Line& first = lines.front();
  if (!h.alphabet) h.alphabet = Alphabet();
  if (with_states && !h.states_line) fail(first, "missing states");
  if (!h.initial) fail(first, "missing initial");
}

Plant parse_plant(const std::vector<Line>& lines) {
  Header h;
  h.name = lines[0].tokens.size() > 1 ? lines[0].tokens[1] : "";
  expect_args(lines[0], 1, 1);
  std::vector<const Line*> trans;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (header_line(line, h, true)) continue;
    if (line.tokens[0] == "trans") {
      expect_args(line, 3, 3);
      trans.push_back(&line);
      continue;
    }
    fail(line, "unknown directive '" + line.tokens[0] + "'");
  }
  finish_header(lines, h, true);
  std::vector<Transition> ts;
  for (const Line* line : trans) {
    const StateId src = state_ref(*line, h, line->tokens[1]);
    const auto& lab = line->tokens[2];
    Label l;
    if (lab == kEpsilonToken) {
      l = Label::epsilon();
    } else if (lab == kFaultToken) {
      l = Label::fault();
    } else {
      l = Label::event(event_ref(*line, *h.alphabet, lab));
    }
    ts.push_back({src, l, state_ref(*line, h, line->tokens[3])});
  }
  const StateId init = state_ref(*h.initial_line, h, *h.initial);
  return Automaton(h.name, *h.alphabet, h.states, init, std::move(ts));
}

ObserverDraft parse_observer_lines(const std::vector<Line>& lines) {
  Header h;
  expect_args(lines[0], 1, 1);
  h.name = lines[0].tokens[1];
  std::vector<const Line*> watches, trans;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (header_line(line, h, true)) continue;
    if (line.tokens[0] == "watch") {
      expect_args(line, 1, 64);
      watches.push_back(&line);
    } else if (line.tokens[0] == "trans") {
      expect_args(line, 3, 3);
      trans.push_back(&line);
    } else {
      fail(line, "unknown directive '" + line.tokens[0] + "'");
    }
  }
  finish_header(lines, h, true);
  ObserverDraft d;
  d.name = h.name;
  d.alphabet = *h.alphabet;
  d.states = h.states;
  d.initial = state_ref(*h.initial_line, h, *h.initial);
  d.watch.assign(h.states.size(), {});
  std::vector<bool> watched(h.states.size(), false);
  for (const Line* line : watches) {
    const StateId s = state_ref(*line, h, line->tokens[1]);
    if (watched[s]) fail(*line, "duplicate watch for state '" + line->tokens[1] + "'");
    watched[s] = true;
    for (std::size_t i = 2; i < line->tokens.size(); ++i) {
      d.watch[s].push_back(event_ref(*line, d.alphabet, line->tokens[i]));
    }
  }
  for (const Line* line : trans) {
    d.edges.push_back({state_ref(*line, h, line->tokens[1]), event_ref(*line, d.alphabet, line->tokens[2]),
                       state_ref(*line, h, line->tokens[3])});
  }
  return d;
}

EventSet parse_set(const Line& line, const Alphabet& a, const std::string& tok) {
  if (tok.size() < 2 || tok.front() != '{' || tok.back() != '}') fail(line, "expected a set like {a,b}, got '" + tok + "'");
  EventSet s;
  std::string body = tok.substr(1, tok.size() - 2);
  if (body.empty()) return s;
  std::istringstream in(body);
  for (std::string item; std::getline(in, item, ',');) s.insert(event_ref(line, a, item));
  return s;
}

std::size_t node_ref(const Line& line, const std::string& tok, char prefix, std::size_t count) {
  if (tok.size() < 2 || tok[0] != prefix) fail(line, std::string("expected a node name starting with '") + prefix + "'");
  const std::size_t id = parse_count(line, tok.substr(1));
  if (id >= count) fail(line, "undeclared node '" + tok + "'");
  return id;
}

MostPermissiveObserver parse_mpo(const std::vector<Line>& lines) {
  expect_args(lines[0], 0, 0);
  Header h;
  std::optional<unsigned> k;
  std::vector<const Line*> evens, chooses, observes;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (header_line(line, h, false)) continue;
    const auto& d = line.tokens[0];
    if (d == "k") {
      expect_args(line, 1, 1);
      if (k) fail(line, "duplicate k");
      k = static_cast<unsigned>(parse_count(line, line.tokens[1]));
    } else if (d == "even") {
      expect_args(line, 2, 1u << 20);
      evens.push_back(&line);
    } else if (d == "choose") {
      expect_args(line, 3, 3);
      chooses.push_back(&line);
    } else if (d == "observe") {
      expect_args(line, 3, 3);
      observes.push_back(&line);
    } else {
      fail(line, "unknown directive '" + d + "'");
    }
  }
  finish_header(lines, h, false);
  if (!k) fail(lines[0], "missing k");
  MostPermissiveObserver mpo;
  mpo.alphabet = *h.alphabet;
  mpo.k = *k;
  mpo.evens.resize(evens.size());
  std::vector<bool> declared(evens.size(), false);
  for (const Line* line : evens) {
    const auto id = node_ref(*line, line->tokens[1], 'e', evens.size());
    if (declared[id]) fail(*line, "duplicate even node '" + line->tokens[1] + "'");
    declared[id] = true;
    for (std::size_t i = 2; i < line->tokens.size(); ++i) {
      mpo.evens[id].allowed.push_back(parse_set(*line, mpo.alphabet, line->tokens[i]));
    }
    auto& al = mpo.evens[id].allowed;
    if (!std::is_sorted(al.begin(), al.end(), lex_less) ||
        std::adjacent_find(al.begin(), al.end()) != al.end()) {
      fail(*line, "allowed sets must be distinct and in canonical order");
    }
    mpo.evens[id].odd.assign(al.size(), ~0u);
  }
  mpo.initial = static_cast<std::uint32_t>(node_ref(*h.initial_line, *h.initial, 'e', evens.size()));
  mpo.odds.resize(chooses.size());
  std::vector<bool> odd_declared(chooses.size(), false);
  for (const Line* line : chooses) {
    const auto e = node_ref(*line, line->tokens[1], 'e', evens.size());
    const EventSet x = parse_set(*line, mpo.alphabet, line->tokens[2]);
    const auto o = node_ref(*line, line->tokens[3], 'o', chooses.size());
    auto slot = mpo.find_allowed(static_cast<std::uint32_t>(e), x);
    if (!slot) fail(*line, "choice " + mpo.alphabet.format(x) + " is not allowed at " + line->tokens[1]);
    if (odd_declared[o] || mpo.evens[e].odd[*slot] != ~0u) fail(*line, "duplicate choice");
    odd_declared[o] = true;
    mpo.evens[e].odd[*slot] = static_cast<std::uint32_t>(o);
    mpo.odds[o].even = static_cast<std::uint32_t>(e);
    mpo.odds[o].watch = x;
  }
  for (std::size_t e = 0; e < mpo.evens.size(); ++e) {
    for (auto o : mpo.evens[e].odd) {
      if (o == ~0u) fail(lines[0], "even node e" + std::to_string(e) + " has an allowed set without a choose line");
    }
  }
  for (const Line* line : observes) {
    const auto o = node_ref(*line, line->tokens[1], 'o', chooses.size());
    const unsigned ev = event_ref(*line, mpo.alphabet, line->tokens[2]);
    const auto e = node_ref(*line, line->tokens[3], 'e', evens.size());
    if (!mpo.odds[o].watch.contains(ev)) fail(*line, "observed event is not watched at " + line->tokens[1]);
    mpo.odds[o].observe.emplace_back(ev, static_cast<std::uint32_t>(e));
  }
  for (auto& odd : mpo.odds) {
    std::sort(odd.observe.begin(), odd.observe.end());
    for (std::size_t i = 0; i + 1 < odd.observe.size(); ++i) {
      if (odd.observe[i].first == odd.observe[i + 1].first) fail(lines[0], "nondeterministic observation edge");
    }
    if (odd.observe.size() != odd.watch.size()) fail(lines[0], "odd node is missing an observation edge");
  }
  return mpo;
}

WeightedGraphGame parse_game(const std::vector<Line>& lines) {
  expect_args(lines[0], 0, 0);
  std::optional<std::size_t> n;
  std::optional<std::uint32_t> source;
  std::optional<bool> maximize;
  std::vector<std::size_t> p1;
  bool have_p1 = false;
  std::vector<const Line*> edge_lines;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto& d = line.tokens[0];
    if (d == "version") {
      expect_args(line, 1, 1);
      if (line.tokens[1] != std::to_string(kFormatVersion)) fail(line, "unsupported format version " + line.tokens[1]);
    } else if (d == "vertices") {
      expect_args(line, 1, 1);
      if (n) fail(line, "duplicate vertices");
      n = parse_count(line, line.tokens[1]);
    } else if (d == "player1") {
      if (have_p1) fail(line, "duplicate player1");
      have_p1 = true;
      for (std::size_t j = 1; j < line.tokens.size(); ++j) p1.push_back(parse_count(line, line.tokens[j]));
    } else if (d == "source") {
      expect_args(line, 1, 1);
      if (source) fail(line, "duplicate source");
      source = static_cast<std::uint32_t>(parse_count(line, line.tokens[1]));
    } else if (d == "objective") {
      expect_args(line, 1, 1);
      if (maximize) fail(line, "duplicate objective");
      if (line.tokens[1] != "max" && line.tokens[1] != "min") fail(line, "objective must be max or min");
      maximize = line.tokens[1] == "max";
    } else if (d == "edge") {
      expect_args(line, 3, 3);
      edge_lines.push_back(&line);
    } else {
      fail(line, "unknown directive '" + d + "'");
    }
  }
  if (!n) fail(lines[0], "missing vertices");
  if (!source) fail(lines[0], "missing source");
  std::vector<bool> player1(*n, false);
  for (auto v : p1) {
    if (v >= *n) fail(lines[0], "player1 vertex out of range");
    player1[v] = true;
  }
  std::vector<WeightedEdge> edges;
  for (const Line* line : edge_lines) {
    auto u = parse_count(*line, line->tokens[1]);
    auto v = parse_count(*line, line->tokens[2]);
    if (u >= *n || v >= *n) fail(*line, "edge endpoint out of range");
    edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), parse_int(*line, line->tokens[3])});
  }
  try {
    return WeightedGraphGame(std::move(player1), std::move(edges), *source, maximize.value_or(true));
  } catch (const InputError& e) {
    fail(lines[0], e.what());
  }
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string dot_label(const Alphabet& a, Label l) {
  if (l.is_epsilon()) return "ε";
  if (l.is_fault()) return "f";
  return a.name(l.index());
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += " " + s;
  return out;
}

}  // namespace

std::string_view kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPlant: return "plant";
    case ModelKind::kObserver: return "observer";
    case ModelKind::kMpo: return "mpo";
    case ModelKind::kGame: return "game";
  }
  return "";
}

ModelDocument parse_model(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty()) throw InputError("line 1: empty model");
  const auto& kind = lines[0].tokens[0];
  ModelDocument doc;
  if (kind == "plant") {
    doc.kind = ModelKind::kPlant;
    doc.body = parse_plant(lines);
  } else if (kind == "observer") {
    doc.kind = ModelKind::kObserver;
    ObserverDraft d = parse_observer_lines(lines);
    auto report = validate_observer(d);
    if (!report.valid()) throw InputError("invalid observer: " + report.violations.front().message);
    doc.body = Observer(d);
  } else if (kind == "mpo") {
    doc.kind = ModelKind::kMpo;
    doc.body = parse_mpo(lines);
  } else if (kind == "game") {
    doc.kind = ModelKind::kGame;
    doc.body = parse_game(lines);
  } else {
    fail(lines[0], "unknown model kind '" + kind + "'");
  }
  return doc;
}

ObserverDraft parse_observer_draft(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty()) throw InputError("line 1: empty model");
  if (lines[0].tokens[0] != "observer") fail(lines[0], "expected an observer model");
  return parse_observer_lines(lines);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelDocument read_model_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_model(text);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string serialize(const Automaton& a) {
  std::ostringstream out;
  out << "plant " << a.name() << "\nversion " << kFormatVersion << "\n";
  out << "alphabet" << join(a.alphabet().names()) << "\n";
  out << "states" << join(a.state_names()) << "\n";
  out << "initial " << a.state_name(a.initial()) << "\n";
  for (const auto& t : a.transitions()) {
    out << "trans " << a.state_name(t.src) << " " << a.alphabet().label_name(t.label) << " " << a.state_name(t.dst)
        << "\n";
  }
  return out.str();
}

std::string serialize(const Observer& obs) {
  const ObserverDraft d = obs.to_draft();
  std::ostringstream out;
  out << "observer " << d.name << "\nversion " << kFormatVersion << "\n";
  out << "alphabet" << join(d.alphabet.names()) << "\n";
  out << "states" << join(d.states) << "\n";
  out << "initial " << d.states[d.initial] << "\n";
  for (std::size_t s = 0; s < d.states.size(); ++s) {
    out << "watch " << d.states[s];
    for (auto e : d.watch[s]) out << " " << d.alphabet.name(e);
    out << "\n";
  }
  for (const auto& e : d.edges) {
    out << "trans " << d.states[e.src] << " " << d.alphabet.name(e.event) << " " << d.states[e.dst] << "\n";
  }
  return out.str();
}

std::string serialize(const MostPermissiveObserver& mpo) {
  std::ostringstream out;
  out << "mpo\nversion " << kFormatVersion << "\n";
  out << "alphabet" << join(mpo.alphabet.names()) << "\n";
  out << "k " << mpo.k << "\n";
  out << "initial e" << mpo.initial << "\n";
  for (std::size_t e = 0; e < mpo.evens.size(); ++e) {
    out << "even e" << e;
    for (auto x : mpo.evens[e].allowed) out << " " << mpo.alphabet.format(x);
    out << "\n";
  }
  for (std::size_t e = 0; e < mpo.evens.size(); ++e) {
    for (std::size_t i = 0; i < mpo.evens[e].allowed.size(); ++i) {
      out << "choose e" << e << " " << mpo.alphabet.format(mpo.evens[e].allowed[i]) << " o" << mpo.evens[e].odd[i]
          << "\n";
    }
  }
  for (std::size_t o = 0; o < mpo.odds.size(); ++o) {
    for (const auto& [ev, tgt] : mpo.odds[o].observe) {
      out << "observe o" << o << " " << mpo.alphabet.name(ev) << " e" << tgt << "\n";
    }
  }
  return out.str();
}

std::string serialize(const WeightedGraphGame& game) {
  std::ostringstream out;
  out << "game\nversion " << kFormatVersion << "\n";
  out << "vertices " << game.num_vertices() << "\n";
  out << "player1";
  for (std::uint32_t v = 0; v < game.num_vertices(); ++v) {
    if (game.player1(v)) out << " " << v;
  }
  out << "\nsource " << game.source() << "\n";
  out << "objective " << (game.p1_maximizes() ? "max" : "min") << "\n";
  for (const auto& e : game.edges()) out << "edge " << e.src << " " << e.dst << " " << e.weight << "\n";
  return out.str();
}

std::string serialize(const ModelDocument& doc) {
  return std::visit([](const auto& m) { return serialize(m); }, doc.body);
}

std::string export_dot(const Automaton& a) {
  std::ostringstream out;
  out << "digraph " << dot_quote(a.name()) << " {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (StateId s = 0; s < a.num_states(); ++s) {
    out << "  n" << s << " [label=" << dot_quote(a.state_name(s)) << "];\n";
  }
  out << "  __start -> n" << a.initial() << ";\n";
  for (const auto& t : a.transitions()) {
    out << "  n" << t.src << " -> n" << t.dst << " [label=" << dot_quote(dot_label(a.alphabet(), t.label)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const Observer& obs) {
  const ObserverDraft d = obs.to_draft();
  std::ostringstream out;
  out << "digraph " << dot_quote(d.name) << " {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (StateId s = 0; s < d.states.size(); ++s) {
    out << "  n" << s << " [label=" << dot_quote(d.states[s] + "\\n" + obs.alphabet().format(obs.watch(s)))
        << "];\n";
  }
  out << "  __start -> n" << d.initial << ";\n";
  for (const auto& e : d.edges) {
    out << "  n" << e.src << " -> n" << e.dst << " [label=" << dot_quote(d.alphabet.name(e.event)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const MostPermissiveObserver& mpo) {
  std::ostringstream out;
  out << "digraph \"mpo\" {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (std::size_t e = 0; e < mpo.evens.size(); ++e) {
    out << "  e" << e << " [shape=box,label=\"e" << e << "\"];\n";
  }
  for (std::size_t o = 0; o < mpo.odds.size(); ++o) {
    out << "  o" << o << " [shape=ellipse,label=" << dot_quote(mpo.alphabet.format(mpo.odds[o].watch)) << "];\n";
  }
  out << "  __start -> e" << mpo.initial << ";\n";
  for (std::size_t e = 0; e < mpo.evens.size(); ++e) {
    for (auto o : mpo.evens[e].odd) out << "  e" << e << " -> o" << o << ";\n";
  }
  for (std::size_t o = 0; o < mpo.odds.size(); ++o) {
    for (const auto& [ev, tgt] : mpo.odds[o].observe) {
      out << "  o" << o << " -> e" << tgt << " [label=" << dot_quote(mpo.alphabet.name(ev)) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const WeightedGraphGame& game) {
  std::ostringstream out;
  out << "digraph \"game\" {\n  __start [shape=point];\n";
  for (std::uint32_t v = 0; v < game.num_vertices(); ++v) {
    out << "  v" << v << " [shape=" << (game.player1(v) ? "box" : "circle") << ",label=\"" << v << "\"];\n";
  }
  out << "  __start -> v" << game.source() << ";\n";
  for (const auto& e : game.edges()) {
    out << "  v" << e.src << " -> v" << e.dst << " [label=\"" << e.weight << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const ModelDocument& doc) {
  return std::visit([](const auto& m) { return export_dot(m); }, doc.body);
}

}  // namespace dynobs
