#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "trickle/asymptotics.hpp"
#include "trickle/core.hpp"
#include "trickle/propagation.hpp"

namespace trickle {

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Shortest decimal that parses back to the same double; "inf", "-inf", "nan"
/// for non-finite values.
std::string format_double(double x);

std::string to_csv(const Table& table);
/// Array of objects keyed by column name, in column order.
json table_json(const Table& table);

/// Non-finite doubles become strings so the document stays valid JSON.
json json_number(double x);

json to_json(const NodeState& state);
json to_json(const PropagationTrace& trace);
json to_json(const AsymptoticStats<double>& stats);
json to_json(const SampleMeta& meta);

Table sample_table(const SampleSet& samples);
Table pmf_table(const std::vector<double>& pmf);

/// Writes `text` to `path`, or to `stdout_stream` when path is "-" or empty.
void emit(const std::string& text, const std::string& path, std::ostream& stdout_stream);

}  // namespace trickle
