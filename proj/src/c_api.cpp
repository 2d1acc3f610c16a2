#include "gaze_engine.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "gaze/error.hpp"
#include "gaze/runner.hpp"
#include "gaze/server.hpp"
#include "gaze/service.hpp"
#include "gaze/textio.hpp"
#include "gaze/tools.hpp"

struct ge_store {
  gaze::TemplateStore store;
};

struct ge_service {
  gaze::service::Service service;
  explicit ge_service(gaze::StoreSnapshot snapshot) : service(std::move(snapshot)) {}
};

struct ge_server {
  gaze::service::Server server;
  ge_server(gaze::service::Service& service, gaze::service::ServerOptions options)
      : server(service, std::move(options)) {}
};

namespace {

thread_local std::string last_error;

ge_status to_status(gaze::ErrorCode code) {
  return static_cast<ge_status>(static_cast<int>(code) + 1);
}

template <typename F>
ge_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return GE_OK;
  } catch (const gaze::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GE_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GE_INTERNAL;
  }
}

ge_status null_argument(const char* name) {
  last_error = std::string("null argument: ") + name;
  return GE_NULL_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::vector<std::string> split_ids(const char* csv) {
  std::vector<std::string> out;
  if (!csv) return out;
  std::string current;
  for (const char* p = csv; *p; ++p) {
    if (*p == ',') {
      out.push_back(current);
      current.clear();
    } else if (*p != ' ') {
      current += *p;
    }
  }
  if (!current.empty() || !out.empty()) out.push_back(current);
  return out;
}

gaze::KeyboardLayout layout_from(const char* path) {
  if (path && *path) return gaze::KeyboardLayout::load(path);
  return gaze::KeyboardLayout::default_qwerty();
}

gaze::PathSource source_from(ge_path_source s) {
  return s == GE_SOURCE_RAW ? gaze::PathSource::RawSamples : gaze::PathSource::FixationCentroids;
}

}  // namespace

extern "C" {

GE_API const char* ge_status_name(ge_status status) {
  switch (status) {
    case GE_OK: return "OK";
    case GE_NULL_ARGUMENT: return "NullArgument";
    case GE_INTERNAL: return "Internal";
    default: break;
  }
  const int index = static_cast<int>(status) - 1;
  if (index >= 0 && index <= static_cast<int>(gaze::ErrorCode::UnknownSession)) {
    return gaze::error_code_name(static_cast<gaze::ErrorCode>(index)).data();
  }
  return "Unknown";
}

GE_API const char* ge_last_error(void) { return last_error.c_str(); }

GE_API const char* ge_version(void) { return "1.0.0"; }

GE_API void ge_string_free(char* s) { std::free(s); }

GE_API ge_status ge_store_create(int resample_count, double reject_threshold, ge_store** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new ge_store{gaze::TemplateStore(resample_count, reject_threshold)}; });
}

GE_API ge_status ge_store_bundled(ge_store** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new ge_store{gaze::bundled_store()}; });
}

GE_API ge_status ge_store_load(const char* path, ge_store** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new ge_store{gaze::TemplateStore::load(path)}; });
}

GE_API ge_status ge_store_save(const ge_store* store, const char* path) {
  if (!store) return null_argument("store");
  if (!path) return null_argument("path");
  return guarded([&] { store->store.save(path); });
}

GE_API void ge_store_free(ge_store* store) { delete store; }

GE_API size_t ge_store_size(const ge_store* store) { return store ? store->store.size() : 0; }

GE_API ge_status ge_store_train_paths(ge_store* store, const char* paths_file) {
  if (!store) return null_argument("store");
  if (!paths_file) return null_argument("paths_file");
  return guarded([&] {
    const auto entries = gaze::tools::parse_paths(gaze::textio::read_file(paths_file));
    gaze::TemplateStore next = store->store;
    gaze::tools::train_from_paths(next, entries);
    store->store = std::move(next);
  });
}

GE_API ge_status ge_store_recognize(const ge_store* store, const double* xy, size_t point_count, char** out) {
  if (!store) return null_argument("store");
  if (!xy && point_count) return null_argument("xy");
  if (!out) return null_argument("out");
  return guarded([&] {
    if (store->store.empty()) throw gaze::Error(gaze::ErrorCode::EmptyStore, "template store is empty");
    std::vector<gaze::Point> points(point_count);
    for (size_t i = 0; i < point_count; ++i) points[i] = {xy[2 * i], xy[2 * i + 1]};
    const auto result = store->store.recognize(points);
    nlohmann::json j{{"matched", result.has_value()}};
    if (result) {
      j["template"] = result->template_name;
      j["action_id"] = result->action_id;
      j["score"] = result->score;
      j["distance"] = result->distance;
    }
    *out = dup_string(j.dump());
  });
}

GE_API ge_status ge_store_recognize_replay(const ge_store* store, const char* replay_path, ge_path_source source,
                                           char** out) {
  if (!store) return null_argument("store");
  if (!replay_path) return null_argument("replay_path");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto replay = gaze::Replay::load(replay_path);
    *out = dup_string(gaze::tools::recognize_report(store->store, replay, source_from(source)));
  });
}

GE_API ge_status ge_service_create(const ge_store* store, ge_service** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    gaze::StoreSnapshot snapshot;
    if (store) snapshot = std::make_shared<const gaze::TemplateStore>(store->store);
    *out = new ge_service(std::move(snapshot));
  });
}

GE_API void ge_service_free(ge_service* service) { delete service; }

GE_API ge_status ge_service_handle(ge_service* service, const char* message_json, char** out) {
  if (!service) return null_argument("service");
  if (!message_json) return null_argument("message_json");
  if (!out) return null_argument("out");
  return guarded([&] {
    nlohmann::json replies = nlohmann::json::array();
    for (const auto& r : service->service.handle_frame(message_json)) replies.push_back(nlohmann::json::parse(r));
    *out = dup_string(replies.dump());
  });
}

GE_API ge_status ge_server_start(ge_service* service, const char* host, int port, ge_server** out) {
  if (!service) return null_argument("service");
  if (!out) return null_argument("out");
  return guarded([&] {
    gaze::service::ServerOptions options;
    if (host && *host) options.host = host;
    options.port = port < 0 ? gaze::service::port_from_env() : port;
    auto server = std::make_unique<ge_server>(service->service, options);
    server->server.start();
    *out = server.release();
  });
}

GE_API int ge_server_port(const ge_server* server) { return server ? server->server.port() : 0; }

GE_API void ge_server_stop(ge_server* server) {
  if (server) server->server.stop();
}

GE_API void ge_server_free(ge_server* server) { delete server; }

GE_API void ge_replay_options_init(ge_replay_options* options) {
  if (!options) return;
  const gaze::ArbiterConfig arbiter;
  *options = ge_replay_options{"arbiter", nullptr, GE_SOURCE_FIXATIONS, arbiter.double_click_window_ms,
                               arbiter.hold_threshold_ms, 0, nullptr, nullptr, nullptr, 0};
}

GE_API ge_status ge_replay_run(const char* replay_path, const ge_replay_options* options, char** out) {
  if (!replay_path) return null_argument("replay_path");
  if (!options) return null_argument("options");
  if (!out) return null_argument("out");
  return guarded([&] {
    gaze::RunOptions run;
    run.mode = gaze::parse_mode(options->mode ? options->mode : "");
    run.arbiter = {options->double_click_window_ms, options->hold_threshold_ms};
    run.arbiter.validate();
    if (options->store) run.store = std::make_shared<const gaze::TemplateStore>(options->store->store);
    run.source = source_from(options->source);
    run.seed = options->seed;
    run.password = split_ids(options->password);
    run.phrase = options->phrase ? options->phrase : "";
    run.layout = layout_from(options->layout_path);
    const auto replay = gaze::Replay::load(replay_path);
    std::vector<nlohmann::json> events;
    if (options->via_service) {
      gaze::service::Service service(run.store);
      events = gaze::run_replay_service(service, replay, run);
    } else {
      events = gaze::run_replay_direct(replay, run);
    }
    *out = dup_string(gaze::format_event_log(events));
  });
}

GE_API void ge_auth_sim_options_init(ge_auth_sim_options* options) {
  if (!options) return;
  const gaze::tools::AuthSimOptions d;
  *options = ge_auth_sim_options{d.seed_base,
                                 d.seeds,
                                 d.noise_px,
                                 d.latency_ms,
                                 d.rate_hz,
                                 d.offset_px,
                                 d.config.shape_count,
                                 d.config.password_length,
                                 d.config.epoch_ms,
                                 d.config.inter_epoch_ms,
                                 d.config.accept_margin,
                                 nullptr};
}

GE_API ge_status ge_auth_sim(const ge_auth_sim_options* options, char** out) {
  if (!options) return null_argument("options");
  if (!out) return null_argument("out");
  return guarded([&] {
    gaze::tools::AuthSimOptions o;
    o.seed_base = options->seed_base;
    o.seeds = options->seeds;
    o.noise_px = options->noise_px;
    o.latency_ms = options->latency_ms;
    o.rate_hz = options->rate_hz;
    o.offset_px = options->offset_px;
    o.config.shape_count = options->shape_count;
    o.config.password_length = options->password_length;
    o.config.epoch_ms = options->epoch_ms;
    o.config.inter_epoch_ms = options->inter_epoch_ms;
    o.config.accept_margin = options->accept_margin;
    if (options->transcript_dir) o.transcript_dir = options->transcript_dir;
    const auto result = gaze::tools::auth_sim(o);
    *out = dup_string(gaze::tools::auth_sim_report(o, result));
  });
}

GE_API void ge_type_sim_options_init(ge_type_sim_options* options) {
  if (!options) return;
  const gaze::TypistModel d;
  *options = ge_type_sim_options{nullptr, nullptr, d.seed, d.sigma_px, d.error_rate, d.keystroke_interval_ms, 0};
}

GE_API ge_status ge_type_sim(const ge_type_sim_options* options, char** out) {
  if (!options) return null_argument("options");
  if (!options->phrases_path) return null_argument("phrases_path");
  if (!out) return null_argument("out");
  return guarded([&] {
    gaze::tools::TypeSimOptions o;
    o.typist.seed = options->seed;
    o.typist.sigma_px = options->sigma_px;
    o.typist.error_rate = options->error_rate;
    o.typist.keystroke_interval_ms = options->keystroke_interval_ms;
    o.rba_basis = options->rba_per_character ? gaze::RbaBasis::Characters : gaze::RbaBasis::Keystrokes;
    const auto phrases = gaze::tools::parse_phrases(gaze::textio::read_file(options->phrases_path));
    const auto rows = gaze::tools::type_sim(layout_from(options->layout_path), phrases, o);
    *out = dup_string(gaze::tools::type_sim_report(rows, o));
  });
}

GE_API ge_status ge_bench(uint64_t seed, int gestures, int epochs, char** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = dup_string(gaze::tools::bench_report({seed, gestures, epochs})); });
}

GE_API void ge_synth_options_init(ge_synth_options* options) {
  if (!options) return;
  const gaze::tools::SynthOptions d;
  *options = ge_synth_options{"gesture", d.seed, d.noise_px, d.rate_hz, d.count, nullptr, nullptr};
}

GE_API ge_status ge_synth(const ge_synth_options* options, const char* out_path, char** out) {
  if (!options) return null_argument("options");
  if (!out_path) return null_argument("out_path");
  return guarded([&] {
    gaze::tools::SynthOptions o;
    o.mode = gaze::parse_mode(options->mode ? options->mode : "");
    o.seed = options->seed;
    o.noise_px = options->noise_px;
    o.rate_hz = options->rate_hz;
    o.count = options->count;
    o.password = split_ids(options->password);
    if (options->phrase) o.phrase = options->phrase;
    const auto result = gaze::tools::synth_replay(o);
    result.replay.save(out_path);
    if (out) *out = dup_string(result.description);
  });
}

}  // extern "C"
