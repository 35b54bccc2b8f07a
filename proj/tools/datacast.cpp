// Copyright 2026 The datacast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// datacast: pack an application, broadcast it as a carousel frame stream,
// receive it through a simulated channel, or run the whole chain at once.
//
// Exit codes:
//   0  success
//   1  I/O or other runtime failure (including a failing --exec command)
//   2  configuration or usage error, invalid bundle
//   3  receiver timed out
//   4  integrity failure: a complete application could not be unpacked

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "datacast/datacast.hpp"

namespace fs = std::filesystem;
using namespace dcast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitIntegrity = 4;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::Io:
    case Errc::Truncated:
    case Errc::BadMagic:
    case Errc::TrailingGarbage:
    case Errc::BodyCrcMismatch:
      return kExitError;
    case Errc::DecompressFailure:
    case Errc::ContainerParseFailure:
      return kExitIntegrity;
    default:
      return kExitConfig;
  }
}

std::uint64_t parse_app_id(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidConfig, "app id '" + s + "' is not a number");
  }
}

// ---------------------------------------------------------------------------

struct MuxFlags {
  std::string preset = "drm30-paper";
  std::optional<double> bitrate;
  std::optional<double> audio_bitrate;
  std::optional<double> frame_duration;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "Multiplex preset: drm30-paper, drm30-narrow, drm-vhf")
        ->capture_default_str();
    cmd->add_option("--bitrate", bitrate, "Data channel bitrate in bit/s (overrides preset)");
    cmd->add_option("--audio-bitrate", audio_bitrate, "Audio bitrate in bit/s (capacity accounting only)");
    cmd->add_option("--frame-duration", frame_duration, "Frame duration in seconds (overrides preset)");
  }

  MultiplexConfig resolve() const {
    auto cfg = dcast::preset(preset);
    if (bitrate) cfg.data_bitrate = *bitrate;
    if (audio_bitrate) cfg.audio_bitrate = *audio_bitrate;
    if (frame_duration) cfg.frame_duration = *frame_duration;
    cfg.validate();
    return cfg;
  }
};

struct ChannelFlags {
  ChannelModel model;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--loss", model.frame_loss_prob, "Frame loss probability")->capture_default_str();
    cmd->add_option("--ber", model.bit_error_rate, "Bit error rate")->capture_default_str();
    cmd->add_option("--burst", model.burst_len, "Bits flipped per error event")->capture_default_str();
    cmd->add_option("--seed", model.seed, "Channel noise seed")->capture_default_str();
  }
};

struct AppFlags {
  std::string input_dir;
  std::string entry;
  std::string app_id = "1";
  bool autostart = true;
  std::string content = "app";
  std::string codec = "deflate";
  std::optional<std::uint32_t> assume_compressed_size;

  void add_to(CLI::App* cmd, bool dir_required) {
    auto* dir = cmd->add_option("--input-dir", input_dir, "Directory holding the application files");
    if (dir_required) dir->required();
    cmd->add_option("--entry", entry, "Entry point file name, relative to the input dir");
    cmd->add_option("--app-id", app_id, "Application id (decimal or 0x hex)")->capture_default_str();
    cmd->add_option("--autostart", autostart, "Launch immediately on delivery (true/false)")->capture_default_str();
    cmd->add_option("--content", content, "Content type: app or files")->capture_default_str();
    cmd->add_option("--codec", codec, "Body codec: none, deflate, lzma")->capture_default_str();
    cmd->add_option("--assume-compressed-size", assume_compressed_size,
                    "Cut or zero-pad the body to this many bytes (timing experiments only)");
  }

  ApplicationBundle load_bundle() const {
    auto files = read_directory_files(input_dir);
    if (files.empty()) throw Error(Errc::InvalidConfig, "no files in " + input_dir);
    ContentType type;
    if (content == "app") type = ContentType::InteractiveApplication;
    else if (content == "files") type = ContentType::RawFileSet;
    else throw Error(Errc::InvalidConfig, "content type must be app or files");
    return pack_bundle(std::move(files), ApplicationMetadata{parse_app_id(app_id), entry, autostart, type});
  }
};

void print_pack_summary(std::ostream& os, const ApplicationBundle& bundle, const PackedApplication& p,
                        double bitrate) {
  os << "files " << bundle.files.size() << '\n'
     << "uncompressed " << bundle.total_size() << '\n'
     << "container " << p.header.uncompressed_size << '\n'
     << "compressed " << p.header.compressed_size << " (" << codec_name(p.header.codec) << ")\n"
     << estimate_text(estimate_acquisition_seconds(p.header.compressed_size, bitrate));
}

// ---------------------------------------------------------------------------

struct PackCmd {
  AppFlags app;
  std::string out;
  double bitrate = 5000;

  void add_to(CLI::App& root) {
    auto* cmd = root.add_subcommand("pack", "Bundle, compress and sign a directory into a GPKG file");
    app.add_to(cmd, true);
    cmd->add_option("-o,--out", out, "Output GPKG file")->required();
    cmd->add_option("--bitrate", bitrate, "Bitrate for the printed acquisition estimate")->capture_default_str();
    cmd->callback([this] { code = run(); });
  }

  int run() {
    const auto bundle = app.load_bundle();
    const auto packed = pack_application(bundle, codec_from_name(app.codec), app.assume_compressed_size);
    write_file(out, encode_package(packed));
    print_pack_summary(std::cout, bundle, packed, bitrate);
    return kExitOk;
  }

  int code = kExitOk;
};

struct BroadcastCmd {
  std::string package;
  std::string out;
  MuxFlags mux;
  std::size_t segment_size = kDefaultSegmentSize;
  std::optional<std::uint64_t> frames;
  double cycles = 2.0;
  std::uint64_t start_frame = 0;

  void add_to(CLI::App& root) {
    auto* cmd = root.add_subcommand("broadcast", "Render a GPKG file as a carousel frame stream (GFRM)");
    cmd->add_option("-p,--package", package, "Input GPKG file")->required();
    cmd->add_option("-o,--out", out, "Output GFRM file")->required();
    mux.add_to(cmd);
    cmd->add_option("--segment-size", segment_size, "Segment payload bytes (1..4096)")->capture_default_str();
    cmd->add_option("--frames", frames, "Number of frames to emit");
    cmd->add_option("--cycles", cycles, "Carousel cycles to emit when --frames is absent")->capture_default_str();
    cmd->add_option("--start-frame", start_frame, "Index of the first emitted frame")->capture_default_str();
    cmd->callback([this] { code = run(); });
  }

  int run() {
    const auto cfg = mux.resolve();
    const auto packed = decode_package(read_file(package));
    const auto schedule = build_schedule(packed.header, packed.body, segment_size);
    const FrameSource src(schedule, cfg);
    const double cycle_s = cycle_duration(schedule, cfg);
    const std::uint64_t n =
        frames ? *frames
               : static_cast<std::uint64_t>(std::ceil(cycles * static_cast<double>(schedule.cycle_bytes) /
                                                      static_cast<double>(src.capacity())));

    std::ofstream os(out, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::Io, "cannot write " + out);
    write_gfrm_header(os, static_cast<std::uint32_t>(src.capacity()), n);
    for (std::uint64_t k = 0; k < n; ++k) write_gfrm_frame(os, src.frame_at(start_frame + k));
    if (!os) throw Error(Errc::Io, "cannot write " + out);

    std::cout << "frame_capacity " << src.capacity() << '\n'
              << "groups " << schedule.groups.size() << '\n'
              << "cycle_bytes " << schedule.cycle_bytes << '\n'
              << "cycle_duration " << format_seconds(cycle_s) << " s\n"
              << "frames " << n << '\n';
    return kExitOk;
  }

  int code = kExitOk;
};

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += (c == '\'') ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

struct ReceiveCmd {
  std::string input;
  std::string out_dir;
  std::string exec;
  std::string json_path;
  double frame_duration = 0.4;
  std::optional<double> bitrate;
  std::uint64_t join_frame = 0;
  double timeout_cycles = 100;
  ChannelFlags channel;

  void add_to(CLI::App& root) {
    auto* cmd = root.add_subcommand("receive", "Receive a GFRM stream through a simulated channel");
    cmd->add_option("-i,--input", input, "Input GFRM file")->required();
    cmd->add_option("-o,--out-dir", out_dir, "Directory receiving the delivered files")->required();
    cmd->add_option("--exec", exec, "Command run on delivery, with the entry point path appended");
    cmd->add_option("--report-json", json_path, "Write the machine-readable report here ('-' = stdout)");
    cmd->add_option("--frame-duration", frame_duration, "Frame duration in seconds")->capture_default_str();
    cmd->add_option("--bitrate", bitrate, "Data bitrate for cycle accounting (default: from frame size)");
    cmd->add_option("--join-frame", join_frame, "Skip frames before this index")->capture_default_str();
    cmd->add_option("--timeout-cycles", timeout_cycles, "Give up after this many carousel cycles")
        ->capture_default_str();
    channel.add_to(cmd);
    cmd->callback([this] { code = run(); });
  }

  int run() {
    channel.model.validate();
    if (!(frame_duration > 0)) throw Error(Errc::InvalidConfig, "frame duration must be positive");
    std::ifstream is(input, std::ios::binary);
    if (!is) throw Error(Errc::Io, "cannot open " + input);
    GfrmReader reader(is, frame_duration);

    ReceiverState rx(ReceiverOptions{frame_duration, static_cast<double>(join_frame) * frame_duration, bitrate});
    DirectorySink sink(out_dir);
    std::optional<DeliveredApplication> app;
    std::optional<std::string> failure;
    while (auto frame = reader.next()) {
      if (frame->index < join_frame) continue;
      if (timed_out(rx, frame->index)) break;
      auto survived = perturb_frame(std::move(*frame), channel.model);
      if (!survived) continue;
      rx.ingest_frame(*survived);
      if (rx.status() != ReceiverStatus::Complete) continue;
      try {
        app = deliver(rx, sink);
        break;
      } catch (const Error& e) {
        if (e.code() == Errc::BodyCrcMismatch) continue;
        failure = e.what();
        break;
      }
    }

    const auto rep = report(rx);
    std::cout << report_text(rep);
    if (!json_path.empty()) write_json(rep, app.has_value(), failure);
    if (failure) {
      std::cerr << "datacast: delivery failed: " << *failure << '\n';
      return kExitIntegrity;
    }
    if (!app) {
      std::cerr << "datacast: timed out after " << rep.frames_seen << " frames\n";
      return kExitTimeout;
    }
    std::cout << launch_line(app->launch) << '\n';
    if (!exec.empty()) {
      const auto entry = (fs::path(out_dir) / app->launch.entry_point).string();
      std::cout.flush();
      const int rc = std::system((exec + " " + shell_quote(entry)).c_str());
      if (rc != 0) {
        std::cerr << "datacast: --exec command exited with status " << rc << '\n';
        return kExitError;
      }
    }
    return kExitOk;
  }

  // The limit is only known once the header has announced the body size;
  // before that the receiver keeps listening to the end of the recording.
  bool timed_out(const ReceiverState& rx, std::uint64_t index) const {
    const auto& h = rx.decoded_header();
    if (!h) return false;
    const double min_cycle_bytes = static_cast<double>(encode_signaling(*h).size() + h->compressed_size);
    const double cycle_s = min_cycle_bytes * 8.0 / rx.effective_bitrate();
    return static_cast<double>(index - join_frame + 1) * frame_duration > timeout_cycles * cycle_s + 1e-9;
  }

  void write_json(const AcquisitionReport& rep, bool delivered, const std::optional<std::string>& failure) const {
    ExperimentResult r;
    r.report = rep;
    r.delivery.delivered = delivered;
    r.delivery.error = failure;
    auto j = dcast::report_json(r);
    j.erase("estimate");
    j.erase("schedule");
    emit(json_path, j.dump(2) + "\n");
  }

  static void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream os(path, std::ios::trunc);
    os << text;
    if (!os) throw Error(Errc::Io, "cannot write " + path);
  }

  int code = kExitOk;
};

struct SimulateCmd {
  AppFlags app;
  std::string package;
  bool reference_fixture = false;
  MuxFlags mux;
  ChannelFlags channel;
  std::size_t segment_size = kDefaultSegmentSize;
  std::uint64_t join_frame = 0;
  double launch_latency = 0.0;
  double timeout_cycles = 100;
  std::string json_path;
  std::string sweep;

  void add_to(CLI::App& root) {
    auto* cmd = root.add_subcommand("simulate", "Run pack, carousel, channel and receiver in one process");
    app.add_to(cmd, false);
    cmd->add_option("-p,--package", package, "Use an existing GPKG file as the application");
    cmd->add_flag("--reference-fixture", reference_fixture,
                  "Use the built-in 9-file reference application (14141 bytes)");
    mux.add_to(cmd);
    channel.add_to(cmd);
    cmd->add_option("--segment-size", segment_size, "Segment payload bytes (1..4096)")->capture_default_str();
    cmd->add_option("--join-frame", join_frame, "Frame index at which the receiver starts")->capture_default_str();
    cmd->add_option("--launch-latency", launch_latency, "Seconds added for viewer start-up")->capture_default_str();
    cmd->add_option("--timeout-cycles", timeout_cycles, "Give up after this many carousel cycles")
        ->capture_default_str();
    cmd->add_option("--report-json", json_path, "Write the machine-readable report here ('-' = stdout)");
    cmd->add_option("--sweep", sweep,
                    "Vary one parameter, e.g. bitrate=2500,5000,10000 (also loss, ber, join-frame, segment-size)");
    cmd->callback([this] { code = run(); });
  }

  PackedApplication load() const {
    const int sources = (reference_fixture ? 1 : 0) + (package.empty() ? 0 : 1) + (app.input_dir.empty() ? 0 : 1);
    if (sources != 1)
      throw Error(Errc::InvalidConfig, "give exactly one of --reference-fixture, --package, --input-dir");
    if (!package.empty()) return decode_package(read_file(package));
    const auto bundle = reference_fixture ? fixture::reference_bundle() : app.load_bundle();
    return pack_application(bundle, codec_from_name(app.codec), app.assume_compressed_size);
  }

  nlohmann::json config_json(const MultiplexConfig& cfg, const ChannelModel& ch, std::size_t seg,
                             std::uint64_t join) const {
    return {{"data_bitrate", cfg.data_bitrate},  {"audio_bitrate", cfg.audio_bitrate},
            {"frame_duration", cfg.frame_duration}, {"preset", cfg.preset_name},
            {"loss", ch.frame_loss_prob},         {"ber", ch.bit_error_rate},
            {"burst", ch.burst_len},              {"seed", ch.seed},
            {"segment_size", seg},                {"join_frame", join},
            {"launch_latency", launch_latency},   {"timeout_cycles", timeout_cycles}};
  }

  int run() {
    const auto packed = load();
    const auto base_cfg = mux.resolve();
    channel.model.validate();

    if (sweep.empty()) {
      ExperimentOptions o{Codec::None, segment_size, std::nullopt, join_frame, launch_latency, timeout_cycles};
      const auto res = run_experiment(packed, base_cfg, channel.model, o);
      std::cout << estimate_text(res.estimate) << "cycle_bytes=" << res.cycle_bytes << '\n'
                << "cycle_duration=" << format_seconds(res.cycle_duration) << '\n'
                << report_text(res.report);
      if (res.delivery.launch) std::cout << launch_line(*res.delivery.launch) << '\n';
      if (res.delivery.error) std::cout << "delivery_error=" << *res.delivery.error << '\n';
      if (!json_path.empty()) {
        auto j = dcast::report_json(res);
        j["config"] = config_json(base_cfg, channel.model, segment_size, join_frame);
        ReceiveCmd::emit(json_path, j.dump(2) + "\n");
      }
      if (res.report.outcome != Outcome::Complete) return kExitTimeout;
      // A forced body size cannot unpack; only its timing is of interest.
      if (res.delivery.error && !app.assume_compressed_size) return kExitIntegrity;
      return kExitOk;
    }

    const auto eq = sweep.find('=');
    if (eq == std::string::npos) throw Error(Errc::InvalidConfig, "--sweep expects key=v1,v2,...");
    const auto key = sweep.substr(0, eq);
    std::vector<double> values;
    std::stringstream list(sweep.substr(eq + 1));
    for (std::string item; std::getline(list, item, ',');) {
      try {
        values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw Error(Errc::InvalidConfig, "bad sweep value '" + item + "'");
      }
    }
    if (values.empty()) throw Error(Errc::InvalidConfig, "--sweep has no values");

    auto rows = nlohmann::json::array();
    std::cout << key << "\testimate_s\tcycle_s\telapsed_s\tcycles_spanned\tframes_seen\toutcome\n";
    for (double v : values) {
      auto cfg = base_cfg;
      auto ch = channel.model;
      auto seg = segment_size;
      auto join = join_frame;
      if (key == "bitrate") cfg.data_bitrate = v;
      else if (key == "loss") ch.frame_loss_prob = v;
      else if (key == "ber") ch.bit_error_rate = v;
      else if (key == "join-frame") join = static_cast<std::uint64_t>(v);
      else if (key == "segment-size") seg = static_cast<std::size_t>(v);
      else throw Error(Errc::InvalidConfig, "cannot sweep '" + key + "'");
      cfg.validate();
      ch.validate();
      const auto res = run_experiment(packed, cfg, ch,
                                      ExperimentOptions{Codec::None, seg, std::nullopt, join, launch_latency, timeout_cycles});
      auto opt = [](const std::optional<double>& d) { return d ? format_seconds(*d) : std::string("-"); };
      std::cout << format_seconds(v) << '\t' << format_seconds(res.estimate.seconds) << '\t'
                << format_seconds(res.cycle_duration) << '\t' << opt(res.report.elapsed) << '\t'
                << opt(res.report.cycles_spanned) << '\t' << res.report.frames_seen << '\t'
                << outcome_name(res.report.outcome) << '\n';
      auto j = dcast::report_json(res);
      j["config"] = config_json(cfg, ch, seg, join);
      rows.push_back(std::move(j));
    }
    if (!json_path.empty())
      ReceiveCmd::emit(json_path, nlohmann::json{{"schema", "datacast.sweep/1"}, {"key", key}, {"rows", rows}}.dump(2) + "\n");
    return kExitOk;
  }

  int code = kExitOk;
};

struct EstimateCmd {
  std::uint64_t bytes = 0;
  double bitrate = 5000;

  void add_to(CLI::App& root) {
    auto* cmd = root.add_subcommand("estimate", "Print the bare payload transfer time");
    cmd->add_option("--bytes", bytes, "Payload size in bytes")->required();
    cmd->add_option("--bitrate", bitrate, "Data bitrate in bit/s")->capture_default_str();
    cmd->callback([this] { code = run(); });
  }

  int run() {
    const auto e = estimate_acquisition_seconds(bytes, bitrate);
    std::cout << estimate_text(e) << "bits " << e.payload_bits << '\n' << "seconds " << format_seconds(e.seconds) << '\n';
    return kExitOk;
  }

  int code = kExitOk;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App root{"Carousel datacasting of interactive applications over a simulated digital radio channel"};
  root.require_subcommand(1);
  root.fallthrough();
  root.set_config("--config", "", "Read flags from a TOML/INI file; [section] per subcommand, flags win");
  root.allow_config_extras(CLI::config_extras_mode::error);

  PackCmd pack;
  BroadcastCmd broadcast;
  ReceiveCmd receive;
  SimulateCmd simulate;
  EstimateCmd estimate;
  pack.add_to(root);
  broadcast.add_to(root);
  receive.add_to(root);
  simulate.add_to(root);
  estimate.add_to(root);

  try {
    root.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = root.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  } catch (const Error& e) {
    std::cerr << "datacast: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "datacast: " << e.what() << '\n';
    return kExitError;
  }

  for (const int* c : {&pack.code, &broadcast.code, &receive.code, &simulate.code, &estimate.code})
    if (*c != kExitOk) return *c;
  return kExitOk;
}
