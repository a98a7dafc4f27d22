#include "tangle/qtable.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "tangle/numfmt.hpp"

namespace tangle {

QTable::Row& QTable::row(const std::string& state) {
  Row& r = rows_[state];
  if (r.value.empty()) {
    r.value.assign(action_count_, 0.0);
    r.present.assign(action_count_, false);
  }
  return r;
}

bool QTable::has(const std::string& state, std::size_t action) const {
  auto it = rows_.find(state);
  return it != rows_.end() && it->second.present[action];
}

double QTable::get(const std::string& state, std::size_t action) const {
  auto it = rows_.find(state);
  if (it == rows_.end() || !it->second.present[action]) return 0.0;
  return it->second.value[action];
}

void QTable::set(const std::string& state, std::size_t action, double value) {
  Row& r = row(state);
  if (!r.present[action]) {
    r.present[action] = true;
    ++pairs_;
  }
  r.value[action] = value;
  visited_.insert(state);
}

void QTable::ensure(const std::string& state, std::size_t action) {
  Row& r = row(state);
  if (!r.present[action]) {
    r.present[action] = true;
    r.value[action] = 0.0;
    ++pairs_;
  }
  visited_.insert(state);
}

void QTable::ensure_full_row(const std::string& state) {
  for (std::size_t a = 0; a < action_count_; ++a) ensure(state, a);
}

double QTable::max_existing(const std::string& state) const {
  auto it = rows_.find(state);
  if (it == rows_.end()) return 0.0;
  double best = 0.0;
  bool any = false;
  for (std::size_t a = 0; a < action_count_; ++a) {
    if (!it->second.present[a]) continue;
    if (!any || it->second.value[a] > best) best = it->second.value[a];
    any = true;
  }
  return any ? best : 0.0;
}

std::optional<std::size_t> QTable::best_action(const std::string& state) const {
  auto it = rows_.find(state);
  if (it == rows_.end()) return std::nullopt;
  std::optional<std::size_t> best;
  for (std::size_t a = 0; a < action_count_; ++a) {
    if (!it->second.present[a]) continue;
    if (!best || it->second.value[a] > it->second.value[*best]) best = a;
  }
  return best;
}

void QTable::erase(const std::string& state, std::size_t action) {
  auto it = rows_.find(state);
  if (it == rows_.end() || !it->second.present[action]) return;
  it->second.present[action] = false;
  it->second.value[action] = 0.0;
  --pairs_;
}

void QTable::erase_action_everywhere(std::size_t action) {
  for (auto& [state, r] : rows_) {
    if (r.present[action]) {
      r.present[action] = false;
      r.value[action] = 0.0;
      --pairs_;
    }
  }
}

void QTable::clear() {
  rows_.clear();
  visited_.clear();
  pairs_ = 0;
}

std::vector<std::pair<std::string, std::vector<std::pair<std::size_t, double>>>>
QTable::sorted_rows() const {
  std::vector<std::pair<std::string, std::vector<std::pair<std::size_t, double>>>> out;
  out.reserve(rows_.size());
  for (const auto& [state, r] : rows_) {
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t a = 0; a < action_count_; ++a) {
      if (r.present[a]) entries.emplace_back(a, r.value[a]);
    }
    if (!entries.empty()) out.emplace_back(state, std::move(entries));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void save_qtable(const std::filesystem::path& path, const PuzzleSpec& spec,
                 const std::vector<ActionTriple>& actions, const QTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# puzzle=" << spec.puzzle << " variant=" << spec.variant << "\n";
  for (const auto& [state, entries] : table.sorted_rows()) {
    for (const auto& [action, value] : entries) {
      out << state << '\t' << print_action(spec, actions[action]) << '\t'
          << format_double(value) << '\n';
    }
  }
  if (!out.good()) throw std::runtime_error("failed writing " + path.string());
}

QTableSnapshot load_qtable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string header;
  std::getline(in, header);
  const std::string prefix = "# puzzle=";
  const std::string mid = " variant=";
  auto mid_at = header.find(mid);
  if (header.rfind(prefix, 0) != 0 || mid_at == std::string::npos) {
    throw std::runtime_error(path.string() + ": missing snapshot header");
  }
  const std::string puzzle = header.substr(prefix.size(), mid_at - prefix.size());
  const std::string variant = header.substr(mid_at + mid.size());

  QTableSnapshot snap;
  snap.spec = build_spec(puzzle, variant);
  const std::vector<ActionTriple> actions = enumerate_actions(snap.spec);
  snap.table = QTable(actions.size());

  auto action_index = [&](const std::string& text) -> std::size_t {
    const ActionTriple a = parse_action(snap.spec, text);
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (actions[i] == a) return i;
    }
    throw std::runtime_error(path.string() + ": unknown action " + text);
  };

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected three tab-separated fields");
    }
    const std::string state = line.substr(0, tab1);
    const std::string action_text = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const double value = std::strtod(line.c_str() + tab2 + 1, nullptr);
    parse_state(snap.spec, state);  // reject foreign or malformed states
    snap.table.set(state, action_index(action_text), value);
  }
  return snap;
}

}  // namespace tangle
