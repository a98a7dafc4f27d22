#include "tangle/asp.hpp"

#include <fstream>
#include <stdexcept>

#include "tangle/notation.hpp"

namespace tangle {

GlobalProgram::GlobalProgram(const PuzzleSpec& spec,
                             const std::vector<ActionTriple>& actions) {
  action_labels_.reserve(actions.size());
  for (const ActionTriple& a : actions) {
    action_labels_.push_back(print_action(spec, a));
  }
}

std::size_t GlobalProgram::ensure_state(const std::string& key) {
  auto it = state_ids_.find(key);
  if (it != state_ids_.end()) return it->second;
  const std::size_t id = state_labels_.size();
  state_ids_.emplace(key, id);
  state_labels_.push_back(key);
  StateProgram p;
  p.state = id;
  programs_.push_back(std::move(p));
  return id;
}

std::optional<std::size_t> GlobalProgram::find_state(const std::string& key) const {
  auto it = state_ids_.find(key);
  if (it == state_ids_.end()) return std::nullopt;
  return it->second;
}

bool GlobalProgram::is_forbidden(std::size_t state, std::size_t action) const {
  if (global_constraints_.count(action)) return true;
  return programs_.at(state).constraints.count(action) > 0;
}

void GlobalProgram::record_transition(std::size_t state, std::size_t action,
                                      std::size_t successor) {
  if (is_forbidden(state, action)) {
    throw std::logic_error("transition recorded for a constrained pair");
  }
  programs_.at(state).rules[action].insert(successor);
}

void GlobalProgram::record_forbidden(std::optional<std::size_t> state,
                                     std::size_t action) {
  if (state) {
    StateProgram& p = programs_.at(*state);
    p.constraints.insert(action);
    p.rules.erase(action);
  } else {
    global_constraints_.insert(action);
    for (StateProgram& p : programs_) p.rules.erase(action);
  }
}

std::vector<std::pair<std::size_t, std::size_t>> GlobalProgram::answer_sets(
    std::size_t state) const {
  const StateProgram& p = programs_.at(state);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [action, successors] : p.rules) {
    if (global_constraints_.count(action) || p.constraints.count(action)) continue;
    for (std::size_t s : successors) out.emplace_back(action, s);
  }
  return out;
}

void GlobalProgram::seed_q_rows(std::size_t state, QTable& table) const {
  const std::string& key = state_labels_.at(state);
  for (const auto& [action, successor] : answer_sets(state)) {
    (void)successor;
    table.ensure(key, action);
  }
}

const StateProgram& GlobalProgram::program(std::size_t state) const {
  return programs_.at(state);
}

namespace {

std::string atom(char kind, std::size_t index) {
  return kind + std::to_string(index);
}

}  // namespace

std::string GlobalProgram::print_rules(std::size_t state) const {
  const StateProgram& p = programs_.at(state);
  std::string out = "% " + atom('s', state) + ": " + state_labels_[state] + "\n";
  for (const auto& [action, successors] : p.rules) {
    out += "% " + atom('a', action) + ": " + action_labels_[action] + "\n";
    out += "1 {";
    bool first = true;
    for (std::size_t s : successors) {
      if (!first) out += "; ";
      out += atom('s', s);
      first = false;
    }
    out += "} 1 :- " + atom('a', action) + ", " + atom('s', state) + ".\n";
  }
  return out;
}

std::string GlobalProgram::print_state_constraints(std::size_t state) const {
  const StateProgram& p = programs_.at(state);
  std::string out = "% " + atom('s', state) + ": " + state_labels_[state] + "\n";
  for (std::size_t action : p.constraints) {
    out += "% " + atom('a', action) + ": " + action_labels_[action] + "\n";
    out += ":- " + atom('a', action) + ", " + atom('s', state) + ".\n";
  }
  return out;
}

std::string GlobalProgram::print_global_constraints() const {
  std::string out;
  for (std::size_t action : global_constraints_) {
    out += "% " + atom('a', action) + ": " + action_labels_[action] + "\n";
    out += ":- " + atom('a', action) + ".\n";
  }
  return out;
}

std::string GlobalProgram::print_program(std::size_t state) const {
  return print_rules(state) + print_state_constraints(state);
}

std::string GlobalProgram::print_registry_tsv() const {
  std::string out = "kind\tindex\tlabel\n";
  for (std::size_t a = 0; a < action_labels_.size(); ++a) {
    out += "action\t" + std::to_string(a) + "\t" + action_labels_[a] + "\n";
  }
  for (std::size_t s = 0; s < state_labels_.size(); ++s) {
    out += "state\t" + std::to_string(s) + "\t" + state_labels_[s] + "\n";
  }
  return out;
}

void GlobalProgram::write_files(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out.good()) throw std::runtime_error("failed writing " + path.string());
  };
  for (std::size_t s = 0; s < programs_.size(); ++s) {
    write(dir / (atom('s', s) + ".rules"), print_rules(s));
    write(dir / (atom('s', s) + ".constraints"), print_state_constraints(s));
  }
  write(dir / "global.constraints", print_global_constraints());
  write(dir / "atoms.tsv", print_registry_tsv());
}

namespace {

struct LineCursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool done() {
    skip_ws();
    return pos >= text.size();
  }

  void expect(const std::string& token) {
    skip_ws();
    if (text.compare(pos, token.size(), token) != 0) {
      throw std::runtime_error("program parse error at offset " +
                               std::to_string(pos) + ": expected '" + token + "'");
    }
    pos += token.size();
  }

  bool consume(const std::string& token) {
    skip_ws();
    if (text.compare(pos, token.size(), token) == 0) {
      pos += token.size();
      return true;
    }
    return false;
  }

  std::size_t atom_index(char kind) {
    skip_ws();
    if (pos >= text.size() || text[pos] != kind) {
      throw std::runtime_error("program parse error at offset " +
                               std::to_string(pos) + ": expected a '" +
                               std::string(1, kind) + "' atom");
    }
    ++pos;
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw std::runtime_error("program parse error at offset " +
                               std::to_string(pos) + ": expected an atom index");
    }
    std::size_t value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
      ++pos;
    }
    return value;
  }
};

// Statements with comments stripped; a leading `% s<N>:` comment, when
// present, names the state (it is the only trace of it in an empty program).
std::vector<std::string> statement_lines(const std::string& text,
                                         std::optional<std::size_t>* header_state) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    if (end == text.size() && line.empty()) break;
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) continue;
    if (line[i] == '%') {
      if (header_state && !header_state->has_value()) {
        LineCursor c{line};
        c.pos = i + 1;
        c.skip_ws();
        if (c.pos < line.size() && line[c.pos] == 's') {
          try {
            *header_state = c.atom_index('s');
          } catch (const std::runtime_error&) {
          }
        }
      }
      continue;
    }
    lines.push_back(line);
  }
  return lines;
}

void check_action_bound(std::size_t action, std::size_t action_count) {
  if (action_count && action >= action_count) {
    throw std::runtime_error("action atom a" + std::to_string(action) +
                             " is outside the registry");
  }
}

}  // namespace

StateProgram parse_program(const std::string& text, std::size_t action_count) {
  StateProgram program;
  bool state_known = false;

  std::optional<std::size_t> header_state;
  for (const std::string& line : statement_lines(text, &header_state)) {
    LineCursor c{line};
    std::size_t action = 0;
    std::set<std::size_t> successors;
    bool is_rule = false;

    if (c.consume("1")) {
      is_rule = true;
      c.expect("{");
      while (true) {
        successors.insert(c.atom_index('s'));
        if (c.consume("}")) break;
        c.expect(";");
      }
      c.expect("1");
      c.expect(":-");
    } else {
      c.expect(":-");
    }
    action = c.atom_index('a');
    check_action_bound(action, action_count);
    c.expect(",");
    const std::size_t state = c.atom_index('s');
    c.expect(".");
    if (!c.done()) {
      throw std::runtime_error("program parse error: trailing text in '" + line + "'");
    }

    if (state_known && state != program.state) {
      throw std::runtime_error("program mixes statements for several states");
    }
    program.state = state;
    state_known = true;

    if (is_rule) {
      program.rules[action].insert(successors.begin(), successors.end());
    } else {
      program.constraints.insert(action);
    }
  }
  if (!state_known && header_state) program.state = *header_state;
  return program;
}

std::set<std::size_t> parse_global_constraints(const std::string& text,
                                               std::size_t action_count) {
  std::set<std::size_t> out;
  for (const std::string& line : statement_lines(text, nullptr)) {
    LineCursor c{line};
    c.expect(":-");
    const std::size_t action = c.atom_index('a');
    check_action_bound(action, action_count);
    c.expect(".");
    if (!c.done()) {
      throw std::runtime_error("program parse error: trailing text in '" + line + "'");
    }
    out.insert(action);
  }
  return out;
}

}  // namespace tangle
