#include "cvfspeech/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cvf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw validation_error("config: bad boolean for " + key + ": '" + v + "'");
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw validation_error("config: bad number for " + key + ": '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw validation_error("config: bad integer for " + key + ": '" + v +
                           "'");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw validation_error(origin + ":" + std::to_string(line_no) +
                             ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw validation_error(origin + ":" + std::to_string(line_no) +
                             ": empty key");
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_kv_text(ss.str(), path);
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "vad.frame_ms")
    cfg.vad.frame_ms = parse_double(value, key);
  else if (key == "vad.hop_ms")
    cfg.vad.hop_ms = parse_double(value, key);
  else if (key == "vad.energy_floor_ratio")
    cfg.vad.energy_floor_ratio = parse_double(value, key);
  else if (key == "vad.voicing_autocorr_min")
    cfg.vad.voicing_autocorr_min = parse_double(value, key);
  else if (key == "vad.min_segment_ms")
    cfg.vad.min_segment_ms = parse_double(value, key);
  else if (key == "vad.hangover_frames")
    cfg.vad.hangover_frames = static_cast<int>(parse_long(value, key));
  else if (key == "nld.window_ms")
    cfg.nld.window_ms = parse_double(value, key);
  else if (key == "nld.window_hop_ms")
    cfg.nld.window_hop_ms = parse_double(value, key);
  else if (key == "nld.pe_delay")
    cfg.nld.pe_delay = static_cast<int>(parse_long(value, key));
  else if (key == "nld.pe_normalized")
    cfg.nld.pe_normalized = parse_bool(value, key);
  else if (key == "svm.c")
    cfg.svm.c = parse_double(value, key);
  else if (key == "svm.kernel") {
    if (value == "linear")
      cfg.svm.kernel = KernelKind::linear;
    else if (value == "rbf")
      cfg.svm.kernel = KernelKind::rbf;
    else
      throw validation_error("config: svm.kernel must be linear or rbf");
  } else if (key == "svm.gamma")
    cfg.svm.gamma = parse_double(value, key);
  else if (key == "svm.kkt_tolerance")
    cfg.svm.kkt_tolerance = parse_double(value, key);
  else if (key == "svm.max_passes")
    cfg.svm.max_passes = static_cast<int>(parse_long(value, key));
  else if (key == "svm.standardize")
    cfg.svm.standardize = parse_bool(value, key);
  else if (key == "select.alpha")
    cfg.select_alpha = parse_double(value, key);
  else if (key == "eval.k")
    cfg.eval_k = static_cast<int>(parse_long(value, key));
  else if (key == "eval.seed")
    cfg.eval_seed = static_cast<uint64_t>(parse_long(value, key));
  else
    throw validation_error("config: unknown key '" + key + "'");
}

PipelineConfig load_config(const std::string& path) {
  PipelineConfig cfg;
  for (const auto& [key, value] : parse_kv_file(path))
    apply_config_entry(cfg, key, value);
  cfg.vad.validate();
  cfg.nld.validate();
  cfg.svm.validate();
  return cfg;
}

std::string print_config(const PipelineConfig& cfg) {
  std::string out;
  out += "vad.frame_ms = " + fmt(cfg.vad.frame_ms) + "\n";
  out += "vad.hop_ms = " + fmt(cfg.vad.hop_ms) + "\n";
  out += "vad.energy_floor_ratio = " + fmt(cfg.vad.energy_floor_ratio) + "\n";
  out += "vad.voicing_autocorr_min = " + fmt(cfg.vad.voicing_autocorr_min) +
         "\n";
  out += "vad.min_segment_ms = " + fmt(cfg.vad.min_segment_ms) + "\n";
  out += "vad.hangover_frames = " + std::to_string(cfg.vad.hangover_frames) +
         "\n";
  out += "nld.window_ms = " + fmt(cfg.nld.window_ms) + "\n";
  out += "nld.window_hop_ms = " + fmt(cfg.nld.window_hop_ms) + "\n";
  out += "nld.pe_delay = " + std::to_string(cfg.nld.pe_delay) + "\n";
  out += std::string("nld.pe_normalized = ") +
         (cfg.nld.pe_normalized ? "true" : "false") + "\n";
  out += "svm.c = " + fmt(cfg.svm.c) + "\n";
  out += std::string("svm.kernel = ") +
         (cfg.svm.kernel == KernelKind::linear ? "linear" : "rbf") + "\n";
  out += "svm.gamma = " + fmt(cfg.svm.gamma) + "\n";
  out += "svm.kkt_tolerance = " + fmt(cfg.svm.kkt_tolerance) + "\n";
  out += "svm.max_passes = " + std::to_string(cfg.svm.max_passes) + "\n";
  out += std::string("svm.standardize = ") +
         (cfg.svm.standardize ? "true" : "false") + "\n";
  out += "select.alpha = " + fmt(cfg.select_alpha) + "\n";
  out += "eval.k = " + std::to_string(cfg.eval_k) + "\n";
  out += "eval.seed = " + std::to_string(cfg.eval_seed) + "\n";
  return out;
}

}  // namespace cvf
