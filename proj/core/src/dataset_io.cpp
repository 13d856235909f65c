#include "softtouch/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace softtouch::io {

using nlohmann::json;

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  out.append(buf, res.ptr);
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + file.string());
  out << content;
  if (!out) throw DataError("write failed for " + file.string());
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(start));
      break;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view s, const fs::path& file, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    std::ostringstream msg;
    msg << file.string() << ":" << line << ": bad number '" << s << "'";
    throw DataError(msg.str());
  }
  return v;
}

std::string taxel_column(std::size_t j) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "taxel_%02zu", j);
  return buf;
}

}  // namespace

const std::vector<std::string>& frames_csv_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"t", "input_pressure", "strain"};
    for (std::size_t j = 0; j < kTaxelCount; ++j) c.push_back(taxel_column(j));
    for (const char* name : {"fx", "fy", "fz", "phase", "is_slipping"}) c.emplace_back(name);
    return c;
  }();
  return cols;
}

std::string meta_to_json(const ConditionMeta& m) {
  json j = json::object();
  j["object_shape"] = std::string(to_string(m.object_shape));
  j["object_size"] = m.object_size;
  j["finger_pressure"] = m.finger_pressure;
  j["robot_offset_y"] = m.robot_offset_y;
  j["robot_offset_z"] = m.robot_offset_z;
  j["n_fingers"] = m.n_fingers;
  j["friction_mu"] = m.friction_mu;
  j["repetition"] = m.repetition;
  j["holdout"] = m.holdout;
  j["finger_index"] = m.finger_index;
  return j.dump(2) + "\n";
}

ConditionMeta meta_from_json(const std::string& text) {
  ConditionMeta m;
  try {
    const json j = json::parse(text);
    m.object_shape = parse_object_shape(j.at("object_shape").get<std::string>());
    m.object_size = j.at("object_size").get<double>();
    m.finger_pressure = j.at("finger_pressure").get<double>();
    m.robot_offset_y = j.at("robot_offset_y").get<double>();
    m.robot_offset_z = j.at("robot_offset_z").get<double>();
    m.n_fingers = j.at("n_fingers").get<int>();
    m.friction_mu = j.at("friction_mu").get<double>();
    m.repetition = j.at("repetition").get<int>();
    m.holdout = j.value("holdout", false);
    m.finger_index = j.value("finger_index", 0);
  } catch (const json::exception& e) {
    throw DataError(std::string("meta.json: ") + e.what());
  }
  m.validate();
  return m;
}

void write_frames_csv(const fs::path& file, const Episode& ep) {
  std::string out;
  out.reserve(ep.size() * 220 + 256);
  const auto& cols = frames_csv_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out.push_back(',');
    out += cols[c];
  }
  out.push_back('\n');
  for (std::size_t i = 0; i < ep.size(); ++i) {
    const auto& f = ep.frames[i];
    append_double(out, f.t);
    out.push_back(',');
    append_double(out, f.input_pressure);
    out.push_back(',');
    append_double(out, f.strain);
    for (double v : f.taxels) {
      out.push_back(',');
      append_double(out, v);
    }
    const auto& l = ep.labels[i];
    for (double v : {l.fx, l.fy, l.fz}) {
      out.push_back(',');
      append_double(out, v);
    }
    out.push_back(',');
    out += to_string(ep.phases[i].phase);
    out += ep.phases[i].is_slipping ? ",1\n" : ",0\n";
  }
  write_file(file, out);
}

FramesFile read_frames_csv(const fs::path& file, bool require_all_columns) {
  if (!fs::exists(file)) throw DataError("no such file: " + file.string());
  const std::string text = read_file(file);
  std::string_view rest(text);

  auto next_line = [&rest]() -> std::optional<std::string_view> {
    if (rest.empty()) return std::nullopt;
    auto pos = rest.find('\n');
    std::string_view line = rest.substr(0, pos);
    rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  auto header_line = next_line();
  if (!header_line) throw DataError(file.string() + ": empty file");
  const auto header = split(*header_line, ',');
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t c = 0; c < header.size(); ++c) index.emplace(std::string(header[c]), c);

  const auto& cols = frames_csv_columns();
  std::vector<std::string> missing;
  for (const auto& name : cols) {
    if (!index.count(name)) missing.push_back(name);
  }
  const auto is_label_col = [](const std::string& n) {
    return n == "fx" || n == "fy" || n == "fz" || n == "phase" || n == "is_slipping";
  };
  for (const auto& name : missing) {
    if (require_all_columns || !is_label_col(name)) {
      throw DataError(file.string() + ": missing column '" + name + "'");
    }
  }

  auto col = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  const std::size_t c_t = *col("t"), c_p = *col("input_pressure"), c_s = *col("strain");
  std::array<std::size_t, kTaxelCount> c_tax{};
  for (std::size_t j = 0; j < kTaxelCount; ++j) c_tax[j] = *col(taxel_column(j));
  const auto c_fx = col("fx"), c_fy = col("fy"), c_fz = col("fz");
  const auto c_phase = col("phase"), c_slip = col("is_slipping");

  FramesFile out;
  out.has_labels = c_fx && c_fy && c_fz;
  std::size_t line_no = 1;
  while (auto line = next_line()) {
    ++line_no;
    if (line->empty()) continue;
    const auto fields = split(*line, ',');
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << file.string() << ":" << line_no << ": expected " << header.size() << " fields, got "
          << fields.size();
      throw DataError(msg.str());
    }
    SensorFrame f;
    f.t = parse_double(fields[c_t], file, line_no);
    f.input_pressure = parse_double(fields[c_p], file, line_no);
    f.strain = parse_double(fields[c_s], file, line_no);
    for (std::size_t j = 0; j < kTaxelCount; ++j) f.taxels[j] = parse_double(fields[c_tax[j]], file, line_no);
    out.frames.push_back(f);

    ForceVector l;
    if (out.has_labels) {
      l.fx = parse_double(fields[*c_fx], file, line_no);
      l.fy = parse_double(fields[*c_fy], file, line_no);
      l.fz = parse_double(fields[*c_fz], file, line_no);
    }
    out.labels.push_back(l);

    PhaseMark pm;
    if (c_phase) pm.phase = parse_phase(fields[*c_phase]);
    if (c_slip) pm.is_slipping = fields[*c_slip] == "1";
    out.phases.push_back(pm);
  }
  return out;
}

void write_episode(const fs::path& dir, const Episode& ep) {
  fs::create_directories(dir);
  write_file(dir / "meta.json", meta_to_json(ep.meta));
  write_frames_csv(dir / "frames.csv", ep);
}

Episode read_episode(const fs::path& dir) {
  Episode ep;
  ep.meta = meta_from_json(read_file(dir / "meta.json"));
  auto file = read_frames_csv(dir / "frames.csv", true);
  ep.frames = std::move(file.frames);
  ep.labels = std::move(file.labels);
  ep.phases = std::move(file.phases);
  return ep;
}

void write_dataset(const fs::path& root, const Dataset& episodes) {
  fs::create_directories(root);
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "episode_%04zu", i);
    write_episode(root / name, episodes[i]);
  }
}

namespace {
std::vector<fs::path> episode_dirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}
}  // namespace

Dataset read_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw DataError("dataset directory not found: " + root.string());
  Dataset out;
  for (const auto& dir : episode_dirs(root)) out.push_back(read_episode(dir));
  if (out.empty()) throw DataError("no episodes under " + root.string());
  return out;
}

std::string ValidationReport::summary() const {
  std::ostringstream ss;
  ss << "episodes=" << episodes << " frames=" << frames << " train=" << train_episodes
     << " validation=" << validation_episodes << " holdout=" << holdout_episodes;
  if (!ok()) {
    ss << "\n" << errors.size() << " problem(s):";
    for (const auto& e : errors) ss << "\n  - " << e;
  }
  return ss.str();
}

ValidationReport validate_dataset(const fs::path& root) {
  ValidationReport report;
  if (!fs::is_directory(root)) {
    report.errors.push_back("dataset directory not found: " + root.string());
    return report;
  }
  const auto dirs = episode_dirs(root);
  if (dirs.empty()) report.errors.push_back("no episodes under " + root.string());
  for (const auto& dir : dirs) {
    try {
      Episode ep = read_episode(dir);
      ep.validate();
      if (ep.frames.empty()) throw DataError("no frames");
      for (const auto& f : ep.frames) {
        if (f.input_pressure < 0.0 || f.input_pressure > 60.0) {
          throw DataError("input_pressure outside [0, 60] kPa");
        }
      }
      ++report.episodes;
      report.frames += ep.size();
      if (ep.meta.holdout) ++report.holdout_episodes;
      else if (ep.meta.is_train()) ++report.train_episodes;
      else ++report.validation_episodes;
    } catch (const std::exception& e) {
      report.errors.push_back(dir.filename().string() + ": " + e.what());
    }
  }
  if (report.errors.empty()) {
    if (report.train_episodes == 0) report.errors.push_back("no training split (repetitions 1-3)");
    if (report.validation_episodes == 0) report.errors.push_back("no validation split");
    if (report.holdout_episodes == 0) report.errors.push_back("no holdout object episodes");
  }
  return report;
}

}  // namespace softtouch::io
