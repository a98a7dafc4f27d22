#include "tangle/notation.hpp"

#include <unordered_map>

namespace tangle {

namespace {

class Cursor {
 public:
  Cursor(const std::string& text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) throw ParseError(pos_, "expected a name");
    return text_.substr(start, pos_ - start);
  }

  std::string keyword(const std::string& word) {
    skip_ws();
    std::size_t start = pos_;
    std::string id = identifier();
    if (id != word) throw ParseError(start, "expected '" + word + "'");
    return id;
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

HoleFace parse_sign(Cursor& c) {
  if (c.consume('+')) return HoleFace::positive;
  if (c.consume('-')) return HoleFace::negative;
  throw ParseError(c.pos(), "expected '+' or '-'");
}

char sign_char(HoleFace f) { return f == HoleFace::positive ? '+' : '-'; }

}  // namespace

std::string print_state(const PuzzleSpec& spec, const PuzzleState& state) {
  std::string out;
  for (std::size_t slot = 0; slot < spec.long_objects.size(); ++slot) {
    if (slot > 0) out += ';';
    out += "chain(";
    out += spec.name_of(spec.long_objects[slot]);
    out += ")=[";
    const auto& chain = state.chains[slot];
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (i > 0) out += ',';
      out += sign_char(chain[i].face);
      out += spec.objects[chain[i].hole].crossing_label;
    }
    out += ']';
  }
  return out;
}

PuzzleState parse_state(const PuzzleSpec& spec, const std::string& text) {
  // Accept both the hole's own name and its chain label.
  std::unordered_map<std::string, ObjectIndex> holes;
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    if (spec.objects[i].cls != ObjectClass::holed) continue;
    holes[spec.objects[i].name] = static_cast<ObjectIndex>(i);
    holes[spec.objects[i].crossing_label] = static_cast<ObjectIndex>(i);
  }

  PuzzleState state;
  state.chains.resize(spec.long_objects.size());
  std::vector<bool> seen(spec.long_objects.size(), false);

  Cursor c(text);
  while (true) {
    std::size_t at = c.pos();
    c.keyword("chain");
    c.expect('(');
    at = c.pos();
    std::string owner_name = c.identifier();
    std::size_t slot = 0;
    {
      bool found = false;
      for (std::size_t i = 0; i < spec.long_objects.size(); ++i) {
        if (spec.name_of(spec.long_objects[i]) == owner_name) {
          slot = i;
          found = true;
          break;
        }
      }
      if (!found) throw ParseError(at, "unknown long object: " + owner_name);
      if (seen[slot]) throw ParseError(at, "duplicate chain for " + owner_name);
      seen[slot] = true;
    }
    c.expect(')');
    c.expect('=');
    c.expect('[');
    if (!c.consume(']')) {
      while (true) {
        HoleFace face = parse_sign(c);
        at = c.pos();
        std::string hole_name = c.identifier();
        auto it = holes.find(hole_name);
        if (it == holes.end()) throw ParseError(at, "unknown object: " + hole_name);
        state.chains[slot].push_back({face, it->second});
        if (c.consume(']')) break;
        c.expect(',');
      }
    }
    if (!c.consume(';')) break;
    if (c.at_end()) break;  // trailing separator
  }
  if (!c.at_end()) throw ParseError(c.pos(), "unexpected trailing text");
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw ParseError(text.size(),
                       "missing chain for " + spec.name_of(spec.long_objects[i]));
    }
  }
  return state;
}

CanonicalKey canonical_key(const PuzzleSpec& spec, const PuzzleState& state) {
  return print_state(spec, state);
}

std::string print_action(const PuzzleSpec& spec, const ActionTriple& action) {
  std::string out = "pass(";
  out += spec.name_of(action.ce);
  out += ',';
  out += spec.name_of(action.he);
  out += ',';
  out += sign_char(action.hf);
  out += ')';
  return out;
}

ActionTriple parse_action(const PuzzleSpec& spec, const std::string& text) {
  Cursor c(text);
  auto named_object = [&](std::size_t at, const std::string& name) {
    try {
      return spec.index_of(name);
    } catch (const std::invalid_argument&) {
      throw ParseError(at, "unknown object: " + name);
    }
  };
  c.keyword("pass");
  c.expect('(');
  std::size_t at = c.pos();
  ActionTriple action;
  action.ce = named_object(at, c.identifier());
  c.expect(',');
  at = c.pos();
  std::string he_name = c.identifier();
  action.he = named_object(at, he_name);
  if (spec.objects[action.he].cls != ObjectClass::holed) {
    throw ParseError(at, he_name + " is not a holed object");
  }
  c.expect(',');
  action.hf = parse_sign(c);
  c.expect(')');
  if (!c.at_end()) throw ParseError(c.pos(), "unexpected trailing text");
  return action;
}

std::string print_plan(const PuzzleSpec& spec, const std::vector<ActionTriple>& plan) {
  std::string out;
  for (const ActionTriple& a : plan) {
    out += print_action(spec, a);
    out += '\n';
  }
  return out;
}

}  // namespace tangle
