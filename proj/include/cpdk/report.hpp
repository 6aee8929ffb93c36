#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace cpdk {

/// One named check with its worst observed residual and an optional note
/// about the worst-case sample.
struct CheckItem {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  std::string witness;
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
  }

  double max_residual() const {
    double r = 0;
    for (const CheckItem& c : items) r = std::max(r, c.residual);
    return r;
  }

  const CheckItem* find(const std::string& name) const {
    for (const CheckItem& c : items)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct SymmetryReport {
  double max_residual = 0.0;
  bool pass = true;
  std::string worst_x;
  std::string worst_y;
};

struct CentralityReport {
  bool central = false;
  bool unital = false;
  double central_residual = 0.0;
  double unital_residual = 0.0;
};

}  // namespace cpdk
