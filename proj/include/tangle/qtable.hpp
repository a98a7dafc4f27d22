#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tangle/notation.hpp"
#include "tangle/puzzle.hpp"

namespace tangle {

// Sparse action-value table keyed by (canonical state key, action index).
// Rows hold only the entries that were actually created; a missing entry
// reads as zero but does not take part in max/argmax over existing entries.
class QTable {
 public:
  explicit QTable(std::size_t action_count) : action_count_(action_count) {}

  std::size_t action_count() const { return action_count_; }

  bool has(const std::string& state, std::size_t action) const;
  // Value of an entry, zero when absent.
  double get(const std::string& state, std::size_t action) const;
  void set(const std::string& state, std::size_t action, double value);
  // Creates the entry at zero; existing values are left alone.
  void ensure(const std::string& state, std::size_t action);
  void ensure_full_row(const std::string& state);

  // Max over the state's existing entries, zero when it has none.
  double max_existing(const std::string& state) const;
  // Best existing action, lowest index on ties; empty when the row is empty.
  std::optional<std::size_t> best_action(const std::string& state) const;

  void erase(const std::string& state, std::size_t action);
  void erase_action_everywhere(std::size_t action);

  void mark_visited(const std::string& state) { visited_.insert(state); }
  std::size_t visited_count() const { return visited_.size(); }
  bool was_visited(const std::string& state) const { return visited_.count(state) > 0; }

  std::size_t pair_count() const { return pairs_; }
  std::size_t state_count() const { return rows_.size(); }

  void clear();

  // Rows sorted by state key with (action, value) entries ascending.
  std::vector<std::pair<std::string, std::vector<std::pair<std::size_t, double>>>>
  sorted_rows() const;

 private:
  struct Row {
    std::vector<double> value;
    std::vector<bool> present;
  };
  Row& row(const std::string& state);

  std::size_t action_count_;
  std::unordered_map<std::string, Row> rows_;
  std::unordered_set<std::string> visited_;
  std::size_t pairs_ = 0;
};

// Snapshot format: `# puzzle=<name> variant=<v>` then one row per entry,
// `state<TAB>action<TAB>value`, sorted by state then action order.
void save_qtable(const std::filesystem::path& path, const PuzzleSpec& spec,
                 const std::vector<ActionTriple>& actions, const QTable& table);

struct QTableSnapshot {
  PuzzleSpec spec;  // rebuilt from the header
  QTable table{0};
};

QTableSnapshot load_qtable(const std::filesystem::path& path);

}  // namespace tangle
