#include "ralearn/theory.hpp"

#include <algorithm>

#include "ralearn/words.hpp"

namespace ralearn {

DataValue fresh_value(std::span<const DataValue> context) {
  std::vector<DataValue> sorted(context.begin(), context.end());
  std::sort(sorted.begin(), sorted.end());
  DataValue candidate = 0;
  for (DataValue v : sorted) {
    if (v == candidate) ++candidate;
    else if (v > candidate) break;
  }
  return candidate;
}

DataValue fresh_value(const DataWord& context) {
  const auto values = context.data_values();
  return fresh_value(values);
}

std::vector<DataValue> potential_values(std::span<const DataValue> context) {
  std::vector<DataValue> out;
  for (DataValue v : context) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  out.push_back(fresh_value(context));
  return out;
}

std::vector<DataValue> potential_values(const DataWord& context) {
  const auto values = context.data_values();
  return potential_values(values);
}

bool same_equality_pattern(std::span<const DataValue> lhs, std::span<const DataValue> rhs) {
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t j = i + 1; j < lhs.size(); ++j) {
      if ((lhs[i] == lhs[j]) != (rhs[i] == rhs[j])) return false;
    }
  }
  return true;
}

bool indistinguishable(const DataWord& lhs, const DataWord& rhs) {
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i].action != rhs[i].action) return false;
  }
  return same_equality_pattern(lhs.data_values(), rhs.data_values());
}

}  // namespace ralearn
