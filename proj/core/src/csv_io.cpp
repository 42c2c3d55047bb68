#include "pedrisk/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "pedrisk/error.hpp"

namespace pedrisk {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& what) {
  throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);  // binary: stable newlines
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return out;
}

int parse_int_field(const std::string& text, const std::filesystem::path& path,
                    std::size_t line_no, const char* field) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail_line(path, line_no, std::string("malformed ") + field + " '" + text + "'");
  }
  return value;
}

double parse_double_field(const std::string& text, const std::filesystem::path& path,
                          std::size_t line_no, const char* field) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    fail_line(path, line_no, std::string("malformed ") + field + " '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text, const std::string& context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError(context + ": malformed number '" + text + "'");
  }
  return value;
}

std::vector<PedestrianTrack> read_trajectory_csv(const std::filesystem::path& path,
                                                 double frame_rate) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  ++line_no;
  if (line == "traj_id,frame,x_m,y_m\r") line.pop_back();
  if (line != "traj_id,frame,x_m,y_m") {
    fail_line(path, line_no, "expected header 'traj_id,frame,x_m,y_m'");
  }

  std::vector<PedestrianTrack> tracks;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4) fail_line(path, line_no, "expected 4 fields");

    const std::string& id = fields[0];
    int frame = parse_int_field(fields[1], path, line_no, "frame");
    double x = parse_double_field(fields[2], path, line_no, "x_m");
    double y = parse_double_field(fields[3], path, line_no, "y_m");

    if (tracks.empty() || tracks.back().id != id) {
      for (const auto& t : tracks) {
        if (t.id == id) fail_line(path, line_no, "traj_id '" + id + "' rows are not grouped");
      }
      if (frame != 0) fail_line(path, line_no, "traj_id '" + id + "' must start at frame 0");
      tracks.push_back({id, frame_rate, {}});
    } else if (frame != static_cast<int>(tracks.back().points.size())) {
      fail_line(path, line_no,
                "frame " + std::to_string(frame) + " not contiguous for traj_id '" + id + "'");
    }
    tracks.back().points.push_back({x, y});
  }
  for (const auto& t : tracks) validate_track(t);
  return tracks;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<PedestrianTrack>& tracks) {
  auto out = open_output(path);
  out << "traj_id,frame,x_m,y_m\n";
  for (const auto& t : tracks) {
    for (std::size_t k = 0; k < t.points.size(); ++k) {
      out << t.id << ',' << k << ',' << format_double(t.points[k].x) << ','
          << format_double(t.points[k].y) << '\n';
    }
  }
  if (!out) throw DataError("failed to write '" + path.string() + "'");
}

FeatureCsv read_feature_csv(const std::filesystem::path& path, double frame_rate) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  bool has_cluster = false, has_risk = false;
  if (line == "traj_id,frame,px,py,vx,vy,ttc") {
  } else if (line == "traj_id,frame,px,py,vx,vy,ttc,cluster") {
    has_cluster = true;
  } else if (line == "traj_id,frame,px,py,vx,vy,ttc,cluster,risk") {
    has_cluster = true;
    has_risk = true;
  } else {
    fail_line(path, line_no, "unexpected feature CSV header");
  }
  const std::size_t n_fields = 7 + (has_cluster ? 1 : 0) + (has_risk ? 1 : 0);

  FeatureCsv result;
  if (has_cluster) result.clusters.emplace();
  if (has_risk) result.risks.emplace();

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != n_fields) {
      fail_line(path, line_no, "expected " + std::to_string(n_fields) + " fields");
    }

    const std::string& id = fields[0];
    int frame = parse_int_field(fields[1], path, line_no, "frame");
    FeatureState s;
    s.px = parse_double_field(fields[2], path, line_no, "px");
    s.py = parse_double_field(fields[3], path, line_no, "py");
    s.vx = parse_double_field(fields[4], path, line_no, "vx");
    s.vy = parse_double_field(fields[5], path, line_no, "vy");
    s.ttc = parse_double_field(fields[6], path, line_no, "ttc");

    auto& tracks = result.dataset.tracks;
    if (tracks.empty() || tracks.back().id != id) {
      if (frame != 0) fail_line(path, line_no, "traj_id '" + id + "' must start at frame 0");
      tracks.push_back({id, frame_rate, {}});
    } else if (frame != static_cast<int>(tracks.back().states.size())) {
      fail_line(path, line_no, "frame not contiguous for traj_id '" + id + "'");
    }
    tracks.back().states.push_back(s);

    if (has_cluster) {
      result.clusters->push_back(parse_int_field(fields[7], path, line_no, "cluster"));
    }
    if (has_risk) {
      try {
        result.risks->push_back(risk_label_from_string(fields[8]));
      } catch (const DataError& e) {
        fail_line(path, line_no, e.what());
      }
    }
  }
  return result;
}

void write_feature_csv(const std::filesystem::path& path,
                       const FeatureDataset& dataset,
                       const std::vector<int>* clusters,
                       const std::vector<RiskLabel>* risks) {
  if (risks != nullptr && clusters == nullptr) {
    throw DataError("write_feature_csv: risk column requires a cluster column");
  }
  const std::size_t rows = dataset.total_rows();
  if (clusters && clusters->size() != rows) {
    throw DataError("write_feature_csv: cluster column size mismatch");
  }
  if (risks && risks->size() != rows) {
    throw DataError("write_feature_csv: risk column size mismatch");
  }

  auto out = open_output(path);
  out << "traj_id,frame,px,py,vx,vy,ttc";
  if (clusters) out << ",cluster";
  if (risks) out << ",risk";
  out << '\n';

  std::size_t row = 0;
  for (const auto& t : dataset.tracks) {
    for (std::size_t k = 0; k < t.states.size(); ++k, ++row) {
      const auto& s = t.states[k];
      out << t.id << ',' << k << ',' << format_double(s.px) << ','
          << format_double(s.py) << ',' << format_double(s.vx) << ','
          << format_double(s.vy) << ',' << format_double(s.ttc);
      if (clusters) out << ',' << (*clusters)[row];
      if (risks) out << ',' << to_string((*risks)[row]);
      out << '\n';
    }
  }
  if (!out) throw DataError("failed to write '" + path.string() + "'");
}

std::vector<ClusterAssignmentRow> read_cluster_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "traj_id,frame,cluster,risk") {
    fail_line(path, line_no, "expected header 'traj_id,frame,cluster,risk'");
  }

  std::vector<ClusterAssignmentRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4) fail_line(path, line_no, "expected 4 fields");
    ClusterAssignmentRow row;
    row.traj_id = fields[0];
    row.frame = parse_int_field(fields[1], path, line_no, "frame");
    row.cluster = parse_int_field(fields[2], path, line_no, "cluster");
    try {
      row.risk = risk_label_from_string(fields[3]);
    } catch (const DataError& e) {
      fail_line(path, line_no, e.what());
    }
    rows.push_back(row);
  }
  return rows;
}

void write_cluster_csv(const std::filesystem::path& path,
                       const std::vector<ClusterAssignmentRow>& rows) {
  auto out = open_output(path);
  out << "traj_id,frame,cluster,risk\n";
  for (const auto& r : rows) {
    out << r.traj_id << ',' << r.frame << ',' << r.cluster << ','
        << to_string(r.risk) << '\n';
  }
  if (!out) throw DataError("failed to write '" + path.string() + "'");
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  auto out = open_output(path);
  for (const auto& [key, value] : entries) {
    out << key << " = " << value << '\n';
  }
  if (!out) throw DataError("failed to write '" + path.string() + "'");
}

}  // namespace pedrisk
