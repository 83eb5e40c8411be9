#include "itd/errors.hpp"

namespace itd {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
  case Errc::schema_mismatch: return "SchemaMismatch";
  case Errc::malformed_row: return "MalformedRow";
  case Errc::dangling_supervisor: return "DanglingSupervisor";
  case Errc::duplicate_user: return "DuplicateUser";
  case Errc::unknown_category: return "UnknownCategory";
  case Errc::valence_out_of_range: return "ValenceOutOfRange";
  case Errc::unparseable: return "Unparseable";
  case Errc::io_failure: return "IoFailure";
  case Errc::truth_mismatch: return "TruthMismatch";
  case Errc::unknown_user: return "UnknownUser";
  case Errc::missing_truth: return "MissingTruth";
  case Errc::invalid_config: return "InvalidConfig";
  case Errc::unknown_key: return "UnknownKey";
  case Errc::type_error: return "TypeError";
  case Errc::empty_class_set: return "EmptyClassSet";
  case Errc::insufficient_class_rows: return "InsufficientClassRows";
  case Errc::too_few_rows: return "TooFewRows";
  case Errc::empty_node: return "EmptyNode";
  case Errc::degenerate_data: return "DegenerateData";
  case Errc::unsupported_model: return "UnsupportedModel";
  case Errc::empty_matrix: return "EmptyMatrix";
  case Errc::non_positive_time: return "NonPositiveTime";
  case Errc::budget_exceeds_rows: return "BudgetExceedsRows";
  case Errc::no_threats: return "NoThreats";
  case Errc::no_rows_for_class: return "NoRowsForClass";
  }
  return "Unknown";
}

bool is_data_error(Errc code) noexcept {
  switch (code) {
  case Errc::schema_mismatch:
  case Errc::malformed_row:
  case Errc::dangling_supervisor:
  case Errc::duplicate_user:
  case Errc::unknown_category:
  case Errc::valence_out_of_range:
  case Errc::unparseable:
  case Errc::io_failure:
  case Errc::truth_mismatch:
  case Errc::unknown_user:
  case Errc::missing_truth:
  case Errc::empty_class_set:
  case Errc::insufficient_class_rows:
  case Errc::too_few_rows:
  case Errc::degenerate_data:
  case Errc::budget_exceeds_rows:
  case Errc::no_threats:
  case Errc::no_rows_for_class:
    return true;
  default:
    return false;
  }
}

namespace {

std::string decorate(Errc code, const std::string &message,
                     std::optional<std::size_t> line) {
  std::string out(errc_name(code));
  if (line)
    out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

} // namespace

Error::Error(Errc code, const std::string &message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)), code_(code),
      line_(line) {}

} // namespace itd
