#pragma once

// Line-oriented description language for (C,F) systems. See README for the grammar.

#include "cflab/catalog.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cflab {

struct SourcePos {
  std::size_t line = 0, col = 0;
};

class DslError : public Error {
 public:
  DslError(SourcePos pos, const std::string& message, bool semantic = false);
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }
  bool semantic() const { return semantic_; }

 private:
  SourcePos pos_;
  std::string message_;
  bool semantic_;
};

// Integer-linear form constant + sum coeff[s] * s.
struct Linear {
  Int constant = 0;
  std::map<std::string, Int> coeff;

  bool is_constant() const;
  Int eval(const std::map<std::string, Int>& env) const;
  std::string str() const;
  friend bool operator==(const Linear& a, const Linear& b);
};

struct OffsetItem {
  std::optional<int> source, target;  // 1-based marks for rank-k edges
  std::vector<Linear> coords;
  SourcePos pos;
};

struct FrameSpec {
  bool hull = true;
  Linear extra;                                  // hull + extra (top spacers)
  std::vector<std::pair<Linear, Linear>> box;    // [a, b) per coordinate
  SourcePos pos;
};

struct TowerFrame {
  int tower = 1;
  FrameSpec spec;
};

struct SystemDescription {
  bool is_catalog = false;
  std::string name;
  CatalogParams params;
  std::vector<SourcePos> param_pos;
  std::size_t dim = 1, rank = 1, horizon = 8;
  std::vector<OffsetItem> items;
  bool has_frame = false;
  bool per_tower = false;
  FrameSpec frame;
  std::vector<TowerFrame> tower_frames;
  SourcePos name_pos, c_pos, f_pos;
  bool has_c = false;
};

bool structurally_equal(const SystemDescription& a, const SystemDescription& b);

// Syntax only.
SystemDescription parse_description(const std::string& text);
// Builds the system; semantic errors name the failing condition and level.
CatalogSystem build_system(const SystemDescription& desc);
// Parse and build; the description is returned when both succeed.
SystemDescription parse_system(const std::string& text);
std::string print(const SystemDescription& desc);

}  // namespace cflab
