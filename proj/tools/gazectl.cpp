// gazectl: command-line front end of the gaze-interaction engine. Talks to
// the engine exclusively through the C interface in gaze_engine.h.

#include <pthread.h>
#include <signal.h>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gaze_engine.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Failure {
  ge_status status;
  std::string context;
};

void check(ge_status status, const std::string& context) {
  if (status != GE_OK) throw Failure{status, context};
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { ge_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct Store {
  ge_store* ptr = nullptr;
  ~Store() { ge_store_free(ptr); }
};

ge_path_source parse_source(const std::string& s) {
  return s == "raw" ? GE_SOURCE_RAW : GE_SOURCE_FIXATIONS;
}

void open_store(Store& store, const std::string& path) {
  if (path.empty()) {
    check(ge_store_bundled(&store.ptr), "bundled templates");
  } else {
    check(ge_store_load(path.c_str(), &store.ptr), path);
  }
}

int serve(const std::string& host, int port) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ge_service* service = nullptr;
  check(ge_service_create(nullptr, &service), "service");
  ge_server* server = nullptr;
  const ge_status status = ge_server_start(service, host.c_str(), port, &server);
  if (status != GE_OK) {
    ge_service_free(service);
    throw Failure{status, "serve"};
  }
  std::cout << "listening on " << host << ":" << ge_server_port(server) << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  ge_server_stop(server);
  ge_server_free(server);
  ge_service_free(service);
  std::cout << "stopped" << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaze-interaction engine tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ge_version()));

  std::string paths_file, out_file, base_store, store_file, source = "fixations";
  int resample = 64;
  double threshold = 0.75;
  auto* train = app.add_subcommand("train", "Train gesture templates from a paths file");
  train->add_option("--paths", paths_file, "Paths file (`path <name> <action> x y ...` per line)")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--out", out_file, "Template store to write")->required();
  train->add_option("--base", base_store, "Existing store to extend")->check(CLI::ExistingFile);
  train->add_option("--n", resample, "Resample count for a new store")->capture_default_str();
  train->add_option("--threshold", threshold, "Reject threshold for a new store")->capture_default_str();

  std::string replay_file;
  auto* recognize = app.add_subcommand("recognize", "Recognize every gesture in a replay file");
  recognize->add_option("replay", replay_file, "Replay file")->required()->check(CLI::ExistingFile);
  recognize->add_option("--store", store_file, "Template store (default: bundled)")->check(CLI::ExistingFile);
  recognize->add_option("--source", source, "Gesture path source")
      ->check(CLI::IsMember({"fixations", "raw"}))
      ->capture_default_str();

  ge_auth_sim_options auth;
  ge_auth_sim_options_init(&auth);
  std::string transcripts;
  auto* auth_sim = app.add_subcommand("auth-sim", "Simulate pursuit authentication over seeds");
  auth_sim->add_option("--seeds", auth.seeds, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
  auth_sim->add_option("--seed-base", auth.seed_base, "First seed")->capture_default_str();
  auth_sim->add_option("--noise", auth.noise_px, "Gaze noise sigma (px)")->capture_default_str();
  auth_sim->add_option("--latency", auth.latency_ms, "Pursuit latency (ms)")->capture_default_str();
  auth_sim->add_option("--rate", auth.rate_hz, "Sample rate (Hz)")->capture_default_str();
  auth_sim->add_option("--offset", auth.offset_px, "Calibration offset of the disturbed run (px)")
      ->capture_default_str();
  auth_sim->add_option("--shapes", auth.shape_count, "Shapes on screen")->capture_default_str();
  auth_sim->add_option("--length", auth.password_length, "Password length")->capture_default_str();
  auth_sim->add_option("--epoch-ms", auth.epoch_ms, "Epoch length (ms)")->capture_default_str();
  auth_sim->add_option("--gap-ms", auth.inter_epoch_ms, "Gap between epochs (ms)")->capture_default_str();
  auth_sim->add_option("--margin", auth.accept_margin, "Accept margin")->capture_default_str();
  auth_sim->add_option("--transcripts", transcripts, "Directory for per-seed transcripts");

  ge_type_sim_options typing;
  ge_type_sim_options_init(&typing);
  std::string phrases_file, layout_file, rba = "keystrokes";
  auto* type_sim = app.add_subcommand("type-sim", "Simulate a typist over a phrase set");
  type_sim->add_option("--phrases", phrases_file, "Phrase file")->required()->check(CLI::ExistingFile);
  type_sim->add_option("--layout", layout_file, "Keyboard layout file")->check(CLI::ExistingFile);
  type_sim->add_option("--seed", typing.seed, "Seed")->capture_default_str();
  type_sim->add_option("--sigma", typing.sigma_px, "Gaze noise sigma (px)")->capture_default_str();
  type_sim->add_option("--error-rate", typing.error_rate, "Chance of aiming at a wrong key")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  type_sim->add_option("--interval", typing.keystroke_interval_ms, "Time between keystrokes (ms)")
      ->capture_default_str();
  type_sim->add_option("--rba", rba, "Backspace rate denominator")
      ->check(CLI::IsMember({"keystrokes", "characters"}))
      ->capture_default_str();

  ge_replay_options run;
  ge_replay_options_init(&run);
  std::string mode = "arbiter", password, phrase;
  bool via_service = false;
  auto* replay = app.add_subcommand("replay", "Drive a replay file through a session mode");
  replay->add_option("replay", replay_file, "Replay file")->required()->check(CLI::ExistingFile);
  replay->add_option("--mode", mode, "Session mode")
      ->check(CLI::IsMember({"arbiter", "gesture", "auth", "typing"}))
      ->capture_default_str();
  replay->add_option("--store", store_file, "Template store for gesture mode")->check(CLI::ExistingFile);
  replay->add_option("--source", source, "Gesture path source")
      ->check(CLI::IsMember({"fixations", "raw"}))
      ->capture_default_str();
  replay->add_option("--double-click-ms", run.double_click_window_ms, "Double-click window")->capture_default_str();
  replay->add_option("--hold-ms", run.hold_threshold_ms, "Hold threshold")->capture_default_str();
  replay->add_option("--seed", run.seed, "Auth session seed")->capture_default_str();
  replay->add_option("--password", password, "Auth password, comma separated (empty enrolls)");
  replay->add_option("--phrase", phrase, "Typing target phrase");
  replay->add_option("--layout", layout_file, "Keyboard layout file")->check(CLI::ExistingFile);
  replay->add_flag("--via-service", via_service, "Route records through the session service");

  std::string host = "127.0.0.1";
  int port = -1;
  auto* serve_cmd = app.add_subcommand("serve", "Run the session service (port from PURSUIT_PORT, default 7317)");
  serve_cmd->add_option("--host", host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", port, "Listen port (0 picks a free port)")->check(CLI::Range(0, 65535));

  std::uint64_t bench_seed = 1;
  int bench_gestures = 2000, bench_epochs = 400;
  auto* bench = app.add_subcommand("bench", "Time recognition and epoch matching on synthetic corpora");
  bench->add_option("--seed", bench_seed, "Seed")->capture_default_str();
  bench->add_option("--gestures", bench_gestures, "Recognize calls")->capture_default_str();
  bench->add_option("--epochs", bench_epochs, "Epoch matches")->capture_default_str();

  ge_synth_options synth;
  ge_synth_options_init(&synth);
  std::string synth_mode = "gesture";
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic replay file");
  synth_cmd->add_option("--mode", synth_mode, "Session mode")
      ->check(CLI::IsMember({"arbiter", "gesture", "auth", "typing"}))
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise_px, "Gaze noise sigma (px)")->capture_default_str();
  synth_cmd->add_option("--rate", synth.rate_hz, "Sample rate (Hz)")->capture_default_str();
  synth_cmd->add_option("--count", synth.count, "Gestures or presses")->capture_default_str();
  synth_cmd->add_option("--password", password, "Auth password to pursue, comma separated");
  synth_cmd->add_option("--phrase", phrase, "Typing phrase");
  synth_cmd->add_option("--out", out_file, "Replay file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto parsed = app.get_subcommands();
    std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitUsage;
  }

  try {
    if (*train) {
      Store store;
      if (base_store.empty()) {
        check(ge_store_create(resample, threshold, &store.ptr), "store");
      } else {
        check(ge_store_load(base_store.c_str(), &store.ptr), base_store);
      }
      check(ge_store_train_paths(store.ptr, paths_file.c_str()), paths_file);
      check(ge_store_save(store.ptr, out_file.c_str()), out_file);
      std::cout << "trained store with " << ge_store_size(store.ptr) << " templates -> " << out_file << '\n';
    } else if (*recognize) {
      Store store;
      open_store(store, store_file);
      OwnedString report;
      check(ge_store_recognize_replay(store.ptr, replay_file.c_str(), parse_source(source), &report.ptr),
            replay_file);
      std::cout << report.str();
    } else if (*auth_sim) {
      if (!transcripts.empty()) auth.transcript_dir = transcripts.c_str();
      OwnedString report;
      check(ge_auth_sim(&auth, &report.ptr), "auth-sim");
      std::cout << report.str();
    } else if (*type_sim) {
      typing.phrases_path = phrases_file.c_str();
      if (!layout_file.empty()) typing.layout_path = layout_file.c_str();
      typing.rba_per_character = rba == "characters";
      OwnedString report;
      check(ge_type_sim(&typing, &report.ptr), "type-sim");
      std::cout << report.str();
    } else if (*replay) {
      Store store;
      if (!store_file.empty()) {
        open_store(store, store_file);
        run.store = store.ptr;
      }
      run.mode = mode.c_str();
      run.source = parse_source(source);
      run.password = password.c_str();
      run.phrase = phrase.c_str();
      if (!layout_file.empty()) run.layout_path = layout_file.c_str();
      run.via_service = via_service ? 1 : 0;
      OwnedString log;
      check(ge_replay_run(replay_file.c_str(), &run, &log.ptr), replay_file);
      std::cout << log.str();
    } else if (*serve_cmd) {
      return serve(host, port);
    } else if (*bench) {
      OwnedString report;
      check(ge_bench(bench_seed, bench_gestures, bench_epochs, &report.ptr), "bench");
      std::cout << report.str();
    } else if (*synth_cmd) {
      synth.mode = synth_mode.c_str();
      synth.password = password.c_str();
      if (!phrase.empty()) synth.phrase = phrase.c_str();
      OwnedString description;
      check(ge_synth(&synth, out_file.c_str(), &description.ptr), out_file);
      std::cout << "wrote " << out_file << ": " << description.str() << '\n';
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.context << ": " << ge_status_name(f.status) << ": " << ge_last_error() << '\n';
    return kExitRuntime;
  }
  std::cout.flush();
  return kExitOk;
}
