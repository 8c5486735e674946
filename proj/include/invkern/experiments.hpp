#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "invkern/errors.hpp"

namespace invkern {

// Flat key/value configuration: file contents, then command-line overrides,
// then per-command defaults (CLI > file > defaults).
struct Config {
  std::map<std::string, std::string> values;
  bool paper_scale = false;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  void set(const std::string& key, const std::string& value) {
    values[key] = value;
  }
  std::string get_string(const std::string& key, const std::string& def) const;
  std::int64_t get_int(const std::string& key, std::int64_t def) const;
  double get_double(const std::string& key, double def) const;
  std::vector<std::int64_t> get_int_list(const std::string& key,
                                         const std::string& def) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::string& def) const;
  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::string& def) const;
};

Config parse_config_text(const std::string& text);
Config load_config_file(const std::string& path);
// "key=value" override.
void apply_override(Config& config, const std::string& assignment);
std::string config_hash_hex(const Config& config);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ResultRecord {
  std::string command;
  std::vector<Table> tables;
  nlohmann::json manifest;
  bool check_passed = true;
  std::vector<std::string> check_notes;
};

std::string table_to_csv(const Table& table);
// One CSV per table plus manifest.json under out_dir (created if needed).
void write_outputs(const ResultRecord& record, const std::string& out_dir);
// Structural validation of the manifest before emission.
void validate_manifest(const nlohmann::json& manifest);

std::string format_double(double v);

// Deterministic fan-out: f(i) must write only to slot i of its outputs.
void parallel_for(int n, int workers, const std::function<void(int)>& f);

ResultRecord cmd_classify(const Config& config);
ResultRecord cmd_generalize(const Config& config);
ResultRecord cmd_dimension(const Config& config);
ResultRecord cmd_rankcheck(const Config& config);
ResultRecord run_command(const std::string& name, const Config& config);

}  // namespace invkern
