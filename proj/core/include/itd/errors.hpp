#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace itd {

enum class Errc {
  // input data
  schema_mismatch,
  malformed_row,
  dangling_supervisor,
  duplicate_user,
  unknown_category,
  valence_out_of_range,
  unparseable,
  io_failure,
  truth_mismatch,
  unknown_user,
  missing_truth,
  // configuration and arguments
  invalid_config,
  unknown_key,
  type_error,
  // sampling
  empty_class_set,
  insufficient_class_rows,
  too_few_rows,
  // models
  empty_node,
  degenerate_data,
  unsupported_model,
  // metrics
  empty_matrix,
  non_positive_time,
  budget_exceeds_rows,
  no_threats,
  no_rows_for_class,
};

std::string_view errc_name(Errc code) noexcept;

/// True for errors caused by bad or inconsistent input files rather than
/// bad arguments or internal faults.
bool is_data_error(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string &message,
        std::optional<std::size_t> line = std::nullopt);

  Errc code() const noexcept { return code_; }
  /// 1-based line number for row-level parse errors.
  std::optional<std::size_t> line() const noexcept { return line_; }

private:
  Errc code_;
  std::optional<std::size_t> line_;
};

} // namespace itd
