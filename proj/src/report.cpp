// Copyright 2026 The cvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvc/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "cvc/errors.hpp"

namespace cvc {

namespace {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string_view value = trim(text);
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw UsageError("invalid numeric value '" + std::string(value) +
                     "' for " + std::string(what));
  }
  return out;
}

int parse_int(std::string_view text, std::string_view what) {
  const std::string_view value = trim(text);
  int out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw UsageError("invalid integer value '" + std::string(value) +
                     "' for " + std::string(what));
  }
  return out;
}

/** Incremental JSON writer producing a fixed two-space-indented layout.
 *  Determinism matters more than flexibility here: every emitter below
 *  visits fields in a hard-coded order, so identical inputs yield
 *  byte-identical reports. */
class JsonWriter {
 public:
  explicit JsonWriter(int digits) : digits_(digits) {}

  void begin_object(bool compact = false) {
    element_prefix();
    out_ += '{';
    stack_.push_back(Frame{false, compact, 0});
  }

  void end_object() { close('}'); }

  void begin_array(bool compact = false) {
    element_prefix();
    out_ += '[';
    stack_.push_back(Frame{true, compact, 0});
  }

  void end_array() { close(']'); }

  void key(std::string_view name) {
    element_prefix();
    append_string(name);
    out_ += ": ";
    pending_value_ = true;
  }

  void value(std::string_view text) {
    element_prefix();
    append_string(text);
  }

  // `const char*` would otherwise prefer the bool overload.
  void value(const char* text) { value(std::string_view(text)); }

  void value(double number) {
    element_prefix();
    out_ += format_real(number, digits_);
  }

  void value(bool flag) {
    element_prefix();
    out_ += flag ? "true" : "false";
  }

  std::string take() {
    out_ += '\n';
    return std::move(out_);
  }

 private:
  struct Frame {
    bool is_array;
    bool compact;
    int count;
  };

  void element_prefix() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (stack_.empty()) return;
    Frame& frame = stack_.back();
    if (frame.count > 0) out_ += ',';
    if (frame.compact) {
      if (frame.count > 0) out_ += ' ';
    } else {
      out_ += '\n';
      out_.append(2 * stack_.size(), ' ');
    }
    ++frame.count;
  }

  void close(char bracket) {
    const Frame frame = stack_.back();
    stack_.pop_back();
    if (!frame.compact && frame.count > 0) {
      out_ += '\n';
      out_.append(2 * stack_.size(), ' ');
    }
    out_ += bracket;
  }

  void append_string(std::string_view text) {
    out_ += '"';
    for (const char c : text) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  int digits_;
  std::string out_;
  std::vector<Frame> stack_;
  bool pending_value_ = false;
};

/** Derived presentation fields shared by the JSON and CSV emitters. */
struct ResultSummary {
  std::vector<ChannelReport> channels;
  std::optional<bool> definition_satisfied;
  std::optional<std::string> threshold_label;
};

ResultSummary summarize(const ScenarioResult& result) {
  ResultSummary summary;
  summary.channels = verify_scenario_channels(result);
  if (!summary.channels.empty()) {
    bool ok = true;
    for (const ChannelReport& channel : summary.channels) {
      ok = ok && channel.definition_satisfied;
    }
    summary.definition_satisfied = ok;
  }
  switch (result.protocol) {
    case Protocol::QndChannel:
    case Protocol::Ccaecc:
    case Protocol::Superdense: {
      const double eps = result.epsilon_measured.has_value()
                             ? *result.epsilon_measured
                             : result.epsilon.value();
      summary.threshold_label =
          epsilon_threshold_label(epsilon_threshold_class(eps));
      break;
    }
    case Protocol::Teleportation:
      summary.threshold_label =
          fidelity_threshold_label(fidelity_threshold_class(
              result.fidelity.value()));
      break;
    case Protocol::ReductionCheck:
      break;
  }
  return summary;
}

void write_params(JsonWriter& json, const ScenarioResult& result) {
  json.key("params");
  json.begin_object();
  for (const auto& [name, value] : result.params) {
    json.key(name);
    json.value(value);
  }
  json.end_object();
}

void write_expr(JsonWriter& json, const QuadExpr& expr,
                const SourceRegistry& registry) {
  json.begin_object();
  json.key("terms");
  json.begin_array();
  for (const QuadExpr::Term& term : expr.terms()) {
    json.begin_object(/*compact=*/true);
    json.key("source");
    json.value(registry.label(term.source));
    json.key("axis");
    json.value(axis_name(term.axis));
    json.key("coeff");
    json.value(term.coeff);
    json.end_object();
  }
  json.end_array();
  json.key("offset");
  json.value(expr.offset());
  json.end_object();
}

void write_figures(JsonWriter& json, const ScenarioResult& result,
                   const ResultSummary& summary) {
  if (result.delta.has_value()) {
    json.key("delta");
    json.value(*result.delta);
  }
  if (result.epsilon.has_value()) {
    json.key("epsilon");
    json.value(*result.epsilon);
  }
  if (result.epsilon_measured.has_value()) {
    json.key("epsilon_measured");
    json.value(*result.epsilon_measured);
  }
  if (result.fidelity.has_value()) {
    json.key("fidelity");
    json.value(*result.fidelity);
  }
  if (result.fidelity_bound.has_value()) {
    json.key("fidelity_bound");
    json.value(*result.fidelity_bound);
  }
  if (summary.threshold_label.has_value()) {
    json.key("threshold_class");
    json.value(std::string_view(*summary.threshold_label));
  }
  if (summary.definition_satisfied.has_value()) {
    json.key("definition_satisfied");
    json.value(*summary.definition_satisfied);
  }
  json.key("engine_agreement");
  json.value(result.engine_agreement);
  json.key("max_commutator_error");
  json.value(result.max_commutator_error);
}

void write_channels(JsonWriter& json, const ResultSummary& summary) {
  if (summary.channels.empty()) return;
  json.key("channels");
  json.begin_array();
  for (const ChannelReport& channel : summary.channels) {
    json.begin_object();
    json.key("input");
    json.value(std::string_view(channel.input_role));
    json.key("retained");
    json.value(std::string_view(channel.retained_role));
    json.key("copy");
    json.value(std::string_view(channel.copy_role));
    json.key("copy_axis");
    json.value(axis_name(channel.copy_axis));
    json.key("residual_copy");
    json.value(channel.residual_copy);
    json.key("residual_backaction");
    json.value(channel.residual_backaction);
    json.key("epsilon");
    json.value(channel.epsilon);
    json.key("retained_deviation");
    json.value(channel.retained_deviation);
    json.key("input_leakage");
    json.value(channel.input_leakage);
    json.key("copy_gain_unit");
    json.value(channel.copy_gain_unit);
    json.key("identity_retention");
    json.value(channel.identity_retention);
    json.key("identity_exact");
    json.value(channel.identity_exact);
    json.key("mean_conditions_ok");
    json.value(channel.mean_conditions_ok);
    json.key("max_commutator_error");
    json.value(channel.max_commutator_error);
    json.key("commutators_canonical");
    json.value(channel.commutators_canonical);
    json.key("definition_satisfied");
    json.value(channel.definition_satisfied);
    json.end_object();
  }
  json.end_array();
}

std::optional<double> param_value(const ScenarioResult& result,
                                  std::string_view key) {
  for (const auto& [name, value] : result.params) {
    if (name == key) return value;
  }
  return std::nullopt;
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text) {
  const std::string_view spec = trim(text);
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) {
    throw UsageError("sweep spec '" + std::string(spec) +
                     "' must look like key=start:stop:steps[:log]");
  }
  SweepSpec out;
  out.key = std::string(trim(spec.substr(0, eq)));
  if (out.key.empty()) {
    throw UsageError("sweep spec '" + std::string(spec) + "' has no key");
  }
  std::vector<std::string_view> parts;
  std::string_view rest = spec.substr(eq + 1);
  while (true) {
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      parts.push_back(rest);
      break;
    }
    parts.push_back(rest.substr(0, colon));
    rest = rest.substr(colon + 1);
  }
  if (parts.size() < 3 || parts.size() > 4) {
    throw UsageError("sweep spec '" + std::string(spec) +
                     "' must look like key=start:stop:steps[:log]");
  }
  out.start = parse_double(parts[0], "sweep start");
  out.stop = parse_double(parts[1], "sweep stop");
  out.steps = parse_int(parts[2], "sweep steps");
  if (out.steps < 1) {
    throw UsageError("sweep steps must be >= 1, got " +
                     std::to_string(out.steps));
  }
  if (parts.size() == 4) {
    if (trim(parts[3]) != "log") {
      throw UsageError("sweep spec '" + std::string(spec) +
                       "' has unknown modifier '" +
                       std::string(trim(parts[3])) + "' (expected 'log')");
    }
    out.log_scale = true;
    if (out.start <= 0.0 || out.stop <= 0.0) {
      throw UsageError("log-scaled sweep endpoints must be positive");
    }
  }
  return out;
}

std::vector<double> expand_sweep(const SweepSpec& spec) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(spec.steps));
  if (spec.steps == 1) {
    values.push_back(spec.start);
    return values;
  }
  for (int k = 0; k < spec.steps; ++k) {
    const double fraction = static_cast<double>(k) /
                            static_cast<double>(spec.steps - 1);
    if (spec.log_scale) {
      values.push_back(spec.start *
                       std::pow(spec.stop / spec.start, fraction));
    } else {
      values.push_back(spec.start + (spec.stop - spec.start) * fraction);
    }
  }
  return values;
}

void apply_config_entry(ScenarioConfig& config, std::string_view key,
                        std::string_view value) {
  const std::string_view k = trim(key);
  const std::string_view v = trim(value);
  if (k == "protocol") {
    const auto protocol = protocol_from_name(v);
    if (!protocol.has_value()) {
      throw UsageError("unknown protocol '" + std::string(v) +
                       "' (expected qnd_channel, ccaecc, superdense, "
                       "reduction_check, or teleportation)");
    }
    config.params.protocol = *protocol;
  } else if (k == "backend") {
    if (v == "ideal") {
      config.params.backend = BackendKind::Ideal;
    } else if (v == "fma") {
      config.params.backend = BackendKind::Fma;
    } else {
      throw UsageError("unknown backend '" + std::string(v) +
                       "' (expected 'ideal' or 'fma')");
    }
  } else if (k == "format") {
    if (v != "json" && v != "csv") {
      throw UsageError("unknown format '" + std::string(v) +
                       "' (expected 'json' or 'csv')");
    }
    config.format = std::string(v);
  } else if (k == "out") {
    config.out_path = std::string(v);
  } else if (k == "sweep") {
    config.sweeps.push_back(parse_sweep_spec(v));
  } else {
    set_scenario_param(config.params, k,
                       parse_double(v, "parameter '" + std::string(k) + "'"));
  }
}

ScenarioConfig parse_config_text(std::string_view text) {
  ScenarioConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_number = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    ++line_number;
    const auto newline = rest.find('\n');
    std::string_view line = rest.substr(0, newline);
    rest = newline == std::string_view::npos ? std::string_view{}
                                             : rest.substr(newline + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_number) +
                       " is not a key = value pair: '" + std::string(line) +
                       "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw UsageError("config line " + std::to_string(line_number) +
                       " is missing a key or value");
    }
    if (key != "sweep" && !seen.insert(std::string(key)).second) {
      throw UsageError("duplicate config key '" + std::string(key) +
                       "' on line " + std::to_string(line_number));
    }
    apply_config_entry(config, key, value);
  }
  return config;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw UsageError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_config_text(buffer.str());
}

int report_precision() {
  const char* raw = std::getenv("CVC_PRECISION_DIGITS");
  if (raw == nullptr || *raw == '\0') return 12;
  const int digits = parse_int(raw, "CVC_PRECISION_DIGITS");
  if (digits < 1 || digits > 17) {
    throw UsageError("CVC_PRECISION_DIGITS must be in [1, 17], got " +
                     std::to_string(digits));
  }
  return digits;
}

std::string format_real(double value, int digits) {
  if (value == 0.0) value = 0.0;  // normalise -0 so reports stay canonical
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", digits, value);
  return buffer;
}

std::string emit_json(const ScenarioResult& result, int digits) {
  const ResultSummary summary = summarize(result);
  JsonWriter json(digits);
  json.begin_object();
  json.key("protocol");
  json.value(protocol_name(result.protocol));
  json.key("backend");
  json.value(backend_name(result.backend));
  write_params(json, result);
  json.key("inputs");
  json.begin_array();
  for (const OutputMode& input : result.inputs) {
    json.begin_object();
    json.key("role");
    json.value(std::string_view(input.role));
    json.key("x");
    write_expr(json, input.quads.x, result.registry);
    json.key("p");
    write_expr(json, input.quads.p, result.registry);
    json.end_object();
  }
  json.end_array();
  json.key("outputs");
  json.begin_array();
  for (const OutputMode& output : result.outputs) {
    json.begin_object();
    json.key("role");
    json.value(std::string_view(output.role));
    json.key("x");
    write_expr(json, output.quads.x, result.registry);
    json.key("p");
    write_expr(json, output.quads.p, result.registry);
    json.end_object();
  }
  json.end_array();
  json.key("moments");
  json.begin_object();
  for (const NamedMoment& moment : result.moments) {
    json.key(moment.name);
    if (moment.oracle.has_value()) {
      json.begin_object(/*compact=*/true);
      json.key("symbolic");
      json.value(moment.symbolic);
      json.key("oracle");
      json.value(*moment.oracle);
      json.end_object();
    } else {
      json.begin_object(/*compact=*/true);
      json.key("symbolic");
      json.value(moment.symbolic);
      json.end_object();
    }
  }
  json.end_object();
  write_channels(json, summary);
  write_figures(json, result, summary);
  json.end_object();
  return json.take();
}

std::string emit_json_sweep(const std::vector<ScenarioResult>& results,
                            int digits) {
  if (results.empty()) throw UsageError("sweep produced no results");
  JsonWriter json(digits);
  json.begin_object();
  json.key("protocol");
  json.value(protocol_name(results.front().protocol));
  json.key("backend");
  json.value(backend_name(results.front().backend));
  json.key("sweep");
  json.begin_array();
  for (const ScenarioResult& result : results) {
    const ResultSummary summary = summarize(result);
    json.begin_object();
    write_params(json, result);
    write_figures(json, result, summary);
    json.end_object();
  }
  json.end_array();
  json.end_object();
  return json.take();
}

std::string emit_csv(const std::vector<ScenarioResult>& results, int digits) {
  static constexpr std::string_view kParamColumns[] = {
      "r", "eta", "pair_r", "fma_r", "encode_r", "encode_p", "encode_x"};
  std::string out =
      "protocol,backend,r,eta,pair_r,fma_r,encode_r,encode_p,encode_x,"
      "delta,epsilon,epsilon_measured,fidelity,fidelity_bound,"
      "threshold_class,definition_satisfied,engine_agreement,"
      "max_commutator_error\n";
  for (const ScenarioResult& result : results) {
    const ResultSummary summary = summarize(result);
    out += protocol_name(result.protocol);
    out += ',';
    out += backend_name(result.backend);
    for (const std::string_view column : kParamColumns) {
      out += ',';
      if (const auto value = param_value(result, column)) {
        out += format_real(*value, digits);
      }
    }
    const auto optional_cell = [&](const std::optional<double>& value) {
      out += ',';
      if (value.has_value()) out += format_real(*value, digits);
    };
    optional_cell(result.delta);
    optional_cell(result.epsilon);
    optional_cell(result.epsilon_measured);
    optional_cell(result.fidelity);
    optional_cell(result.fidelity_bound);
    out += ',';
    if (summary.threshold_label.has_value()) out += *summary.threshold_label;
    out += ',';
    if (summary.definition_satisfied.has_value()) {
      out += *summary.definition_satisfied ? "true" : "false";
    }
    out += ',';
    out += format_real(result.engine_agreement, digits);
    out += ',';
    out += format_real(result.max_commutator_error, digits);
    out += '\n';
  }
  return out;
}

RunOutcome run(const ScenarioConfig& config) {
  RunOutcome outcome;
  try {
    const int digits = report_precision();
    std::vector<ScenarioResult> results;
    const bool swept = !config.sweeps.empty();
    if (swept) {
      std::vector<SweepAxis> axes;
      axes.reserve(config.sweeps.size());
      for (const SweepSpec& spec : config.sweeps) {
        axes.push_back(SweepAxis{spec.key, expand_sweep(spec)});
      }
      results = sweep(config.params, axes);
    } else {
      results.push_back(run_scenario(config.params));
    }
    bool definition_failed = false;
    for (const ScenarioResult& result : results) {
      const ResultSummary summary = summarize(result);
      if (summary.definition_satisfied.has_value() &&
          !*summary.definition_satisfied) {
        definition_failed = true;
      }
    }
    if (config.format == "csv") {
      outcome.report = emit_csv(results, digits);
    } else if (swept) {
      outcome.report = emit_json_sweep(results, digits);
    } else {
      outcome.report = emit_json(results.front(), digits);
    }
    if (definition_failed) {
      outcome.exit_code = 2;
      outcome.diagnostics =
          "definition check failed for at least one grid point";
    }
  } catch (const Error& error) {
    outcome.exit_code = 1;
    outcome.diagnostics = error.what();
  }
  return outcome;
}

}  // namespace cvc
