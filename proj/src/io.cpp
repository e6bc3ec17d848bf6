#include "trickle/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace trickle {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

json cell_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) return json_number(*d);
  return std::get<std::string>(cell);
}

json matrix_json(const matrix_t<double>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

json table_json(const Table& table) {
  json out = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = cell_json(row[c]);
    out.push_back(std::move(obj));
  }
  return out;
}

json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json to_json(const NodeState& s) {
  return {{"tau", json_number(s.tau)},
          {"c", s.c},
          {"t", json_number(s.t)},
          {"interval_start", json_number(s.interval_start)},
          {"version", s.version},
          {"has_fired", s.has_fired}};
}

json to_json(const PropagationTrace& trace) {
  json out;
  json times = json::array();
  for (const double t : trace.update_time) times.push_back(json_number(t));
  out["update_time"] = std::move(times);
  json broadcasts = json::array();
  for (const auto& b : trace.broadcasts)
    broadcasts.push_back({{"time", b.time}, {"sender", b.sender}, {"updated", b.updated}});
  out["broadcasts"] = std::move(broadcasts);
  out["hop_count"] = trace.hop_count;
  out["end_to_end_delay"] = json_number(trace.end_to_end_delay);
  out["message_count"] = trace.message_count;
  out["update_hop"] = trace.update_hop;
  json states = json::array();
  for (const auto& s : trace.final_states) states.push_back(to_json(s));
  out["final_states"] = std::move(states);
  return out;
}

json to_json(const AsymptoticStats<double>& s) {
  return {{"R", s.R},
          {"eta", s.eta},
          {"mu_U", s.mu_U},
          {"mu_theta", s.mu_theta},
          {"gamma_U_sq", s.gamma_U_sq},
          {"gamma_theta_sq", s.gamma_theta_sq},
          {"Delta", s.Delta},
          {"sigma_H_sq", s.sigma_H_sq},
          {"sigma_T_sq", s.sigma_T_sq},
          {"Z", matrix_json(s.Z)},
          {"M", matrix_json(s.M)}};
}

json to_json(const SampleMeta& m) {
  return {{"R", m.R},         {"n", m.n},         {"eta", m.eta},
          {"k", m.k},         {"reps", m.reps},   {"seed", m.seed},
          {"engine", to_string(m.engine)},        {"tau_l", json_number(m.tau_l)},
          {"tau_h", json_number(m.tau_h)}};
}

Table sample_table(const SampleSet& samples) {
  Table t{{"rep", "H", "T"}, {}};
  for (std::size_t r = 0; r < samples.h_samples.size(); ++r)
    t.add_row({static_cast<std::int64_t>(r), static_cast<std::int64_t>(samples.h_samples[r]),
               samples.t_samples[r]});
  return t;
}

Table pmf_table(const std::vector<double>& pmf) {
  Table t{{"m", "probability"}, {}};
  for (std::size_t m = 0; m < pmf.size(); ++m) t.add_row({static_cast<std::int64_t>(m), pmf[m]});
  return t;
}

void emit(const std::string& text, const std::string& path, std::ostream& stdout_stream) {
  if (path.empty() || path == "-") {
    stdout_stream << text;
    stdout_stream.flush();
    if (!stdout_stream) throw io_error("failed writing to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw io_error("cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw io_error("failed writing '" + path + "'");
}

}  // namespace trickle
