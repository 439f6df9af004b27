#include <chrono>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "ldcheck/cli.hpp"
#include "ldcheck/surface.hpp"

using json = nlohmann::ordered_json;

namespace ldc {

uint64_t default_fuel() {
  if (const char* s = std::getenv("LDCHECK_FUEL"); s && *s) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultFuel;
}

static void run_trace(const Environment& env, const CheckOptions& opts, CheckRun& run) {
  const Definition* d = env.find(opts.trace);
  if (!d) {
    run.trace.push_back("no definition named '" + opts.trace + "'");
    return;
  }
  Kernel k(env, opts.fuel);
  std::vector<std::string> names;
  for (const auto& p : d->params) names.push_back(p.name);
  k.trace = [&](const char* step, const TermPtr& t) {
    run.trace.push_back(std::string(step) + " " + pretty_term(t, names));
  };
  try {
    run.trace.push_back("type " + pretty_term(d->type, names));
    TermPtr nf = k.normalize(d->type, opts.freeze);
    run.trace.push_back("normal " + pretty_term(nf, names));
  } catch (const Error& e) {
    run.trace.push_back(std::string("stopped: ") + e.what());
  }
}

CheckRun run_check(const std::vector<std::string>& paths, const CheckOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  CheckRun run;
  Environment env;
  ElabOptions eo;
  eo.fuel = opts.fuel;
  eo.keep_going = opts.keep_going;
  Elaborator el(env, eo);
  try {
    for (const auto& f : expand_paths(paths))
      if (!el.run_file(f) && !opts.keep_going) break;
  } catch (const Error& e) {
    if (e.kind != ErrorKind::IOError) throw;
    run.io_error = e.what();
  }
  run.results = el.results();
  if (!opts.trace.empty()) run_trace(env, opts, run);
  run.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool failed = false;
  for (const auto& r : run.results) failed |= !r.ok;
  run.exit_code = !run.io_error.empty() ? 2 : failed ? 1 : 0;
  return run;
}

std::string report_json(const CheckRun& run, bool with_elapsed) {
  json defs = json::array();
  uint64_t beta = 0, delta = 0;
  size_t ok = 0;
  for (const auto& r : run.results) {
    json d;
    d["name"] = r.name;
    d["verdict"] = r.ok ? "ok" : "error";
    if (!r.ok) {
      json span;
      span["file"] = r.span.file;
      span["line"] = r.span.line;
      span["col"] = r.span.col;
      span["begin"] = r.span.begin;
      span["end"] = r.span.end;
      d["error"] = {{"kind", kind_name(r.kind)}, {"span", span}, {"message", r.message}};
    }
    d["stats"] = {{"betaSteps", r.stats.beta},
                  {"deltaSteps", r.stats.delta},
                  {"fuelUsed", r.stats.fuel_used()}};
    beta += r.stats.beta;
    delta += r.stats.delta;
    ok += r.ok;
    defs.push_back(d);
  }
  json out;
  out["definitions"] = defs;
  out["summary"] = {{"total", run.results.size()},
                    {"ok", ok},
                    {"errors", run.results.size() - ok},
                    {"betaSteps", beta},
                    {"deltaSteps", delta},
                    {"fuelUsed", beta + delta}};
  if (!run.io_error.empty()) out["ioError"] = run.io_error;
  if (!run.trace.empty()) out["trace"] = run.trace;
  if (with_elapsed) out["elapsed"] = run.elapsed;
  return out.dump(2) + "\n";
}

std::string report_text(const CheckRun& run) {
  std::ostringstream os;
  size_t ok = 0;
  for (const auto& r : run.results) {
    if (r.ok) {
      ++ok;
      continue;
    }
    os << "error: " << r.name << ": " << kind_name(r.kind) << ": " << r.message;
    if (!r.span.empty()) os << " [" << r.span.str() << "]";
    os << "\n";
  }
  if (!run.io_error.empty()) os << "io error: " << run.io_error << "\n";
  for (const auto& line : run.trace) os << "trace: " << line << "\n";
  os << ok << " of " << run.results.size() << " definitions ok";
  os << " (" << std::fixed;
  os.precision(2);
  os << run.elapsed << " s)\n";
  return os.str();
}

}  // namespace ldc
