#pragma once

// The theory of natural numbers with equality. Data values are opaque
// identifiers: the only observable relation between two of them is whether
// they are equal, so every operation here looks at equality patterns only.

#include <cstdint>
#include <span>
#include <vector>

namespace ralearn {

using DataValue = std::uint32_t;

class DataWord;

/// Smallest natural number that does not occur in `context`.
DataValue fresh_value(std::span<const DataValue> context);
DataValue fresh_value(const DataWord& context);

/// Distinct values of `context` in first-occurrence order, followed by
/// fresh_value(context). These are the instantiations a tree query tries
/// for the next parameter; one per equivalence class.
std::vector<DataValue> potential_values(std::span<const DataValue> context);
std::vector<DataValue> potential_values(const DataWord& context);

/// True iff both sequences have the same length and d_i = d_j <=> d'_i = d'_j
/// for all index pairs.
bool same_equality_pattern(std::span<const DataValue> lhs, std::span<const DataValue> rhs);

/// R-indistinguishability: identical action sequences and identical
/// equality patterns over the data values.
bool indistinguishable(const DataWord& lhs, const DataWord& rhs);

}  // namespace ralearn
