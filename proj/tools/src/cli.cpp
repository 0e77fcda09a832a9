#include "advisor/cli.hpp"

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "advisor/assessment/question_bank.hpp"
#include "advisor/assessment/session.hpp"
#include "advisor/engine/session.hpp"
#include "advisor/kb/advise.hpp"
#include "advisor/kb/criteria.hpp"
#include "advisor/kb/knowledge_base.hpp"
#include "advisor/service/config.hpp"
#include "advisor/service/http_server.hpp"
#include "advisor/service/service.hpp"
#include "json.hpp"

namespace advisor::cli {
namespace {

namespace fs = std::filesystem;

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw MissingFile("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw MissingFile("cannot write " + p.string());
}

void print_kb_error(const kb::KbError& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
}

kb::KnowledgeBase load_kb_or_default(const std::vector<std::string>& paths) {
  if (paths.empty()) return kb::default_kb();
  std::vector<fs::path> p(paths.begin(), paths.end());
  return kb::load_kb(p);
}

int engine_run(const std::string& file, const std::string& input_dir, std::ostream& out, std::ostream& err,
               std::istream& in) {
  std::string text;
  try {
    text = read_file(file);
  } catch (const MissingFile& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  std::optional<kb::KnowledgeBase> program;
  try {
    const kb::KbSource src{fs::path(file).filename().string(), text};
    program = kb::KnowledgeBase::from_sources(std::span(&src, 1));
  } catch (const kb::KbError& e) {
    print_kb_error(e, err);
    return kExitDiagnostics;
  }
  try {
    engine::Session session(program->rules(),
                            {std::make_shared<engine::DiskFileStore>(input_dir.empty() ? fs::current_path()
                                                                                       : fs::path(input_dir)),
                             &out, &in});
    session.run();
  } catch (const engine::EngineError& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  out.flush();
  return kExitOk;
}

std::string report_json(const kb::AdvisementReport& r) {
  using nlohmann::json;
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back({{"faculty", v.faculty}, {"accepted", v.accepted}, {"recommended", v.recommended}});
  }
  const json body = {{"student",
                      {{"stdid", r.header.stdid},
                       {"name", r.header.name},
                       {"age", r.header.age},
                       {"academic-per", r.header.academic_per},
                       {"academic-type", r.header.academic_type},
                       {"HSSC-year", r.header.hssc_year}}},
                     {"verdicts", verdicts}};
  return body.dump(2) + "\n";
}

int advise(const std::string& in_path, const std::string& out_path, const std::vector<std::string>& kb_paths,
           const std::string& format, std::ostream& out, std::ostream& err) {
  kb::StudentRecord record;
  try {
    record = kb::parse_record(read_file(in_path));
  } catch (const MissingFile& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const kb::MalformedRecord& e) {
    err << "error: " << in_path << ": malformed student record: " << e.what() << '\n';
    return kExitRuntime;
  }
  std::optional<kb::KnowledgeBase> kb;
  try {
    kb = load_kb_or_default(kb_paths);
  } catch (const kb::KbError& e) {
    print_kb_error(e, err);
    return kExitDiagnostics;
  }
  kb::Advisement result;
  try {
    result = kb::evaluate_student(record, *kb);
  } catch (const kb::EngineRuntimeError& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const kb::ReportFormatError& e) {
    err << "error: the knowledge base produced an unreadable report: " << e.what() << '\n';
    return kExitRuntime;
  }
  if (!out_path.empty()) {
    try {
      write_file(out_path, result.raw);
    } catch (const MissingFile& e) {
      err << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
  }
  if (format == "raw") {
    out << result.raw;
  } else if (format == "json") {
    out << report_json(result.report);
  } else {
    for (const auto& v : result.report.verdicts) {
      out << v.faculty << ": accepted, " << (v.recommended ? "recommended" : "not recommended") << '\n';
    }
    const auto n = result.report.verdicts.size();
    out << n << (n == 1 ? " faculty" : " faculties") << " accepted\n";
  }
  return kExitOk;
}

int kb_compile(const std::string& criteria_path, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  std::vector<kb::FacultyCriteria> criteria;
  try {
    criteria = kb::parse_criteria(read_file(criteria_path));
  } catch (const MissingFile& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const kb::CriteriaError& e) {
    err << "error: " << criteria_path << ": " << e.what() << '\n';
    return kExitDiagnostics;
  }
  if (criteria.empty()) err << "warning: " << criteria_path << " defines no faculties\n";
  const auto rules = kb::emit_rules(criteria);

  // The emitted rules must load next to the shipped template and input rule.
  std::vector<kb::KbSource> sources;
  for (const auto& src : kb::shipped_kb_sources()) {
    if (src.name != "fo-mathematics.clp") sources.push_back(src);
  }
  sources.push_back({out_path.empty() ? "<emitted>" : out_path, rules});
  try {
    kb::KnowledgeBase::from_sources(sources);
  } catch (const kb::KbError& e) {
    print_kb_error(e, err);
    return kExitDiagnostics;
  }
  if (out_path.empty()) {
    out << rules;
    return kExitOk;
  }
  try {
    write_file(out_path, rules);
  } catch (const MissingFile& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int bank_check(const std::string& path, std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  std::optional<assessment::QuestionBank> bank;
  try {
    bank = assessment::load_bank(path);
  } catch (const assessment::BankParseError& e) {
    err << "error: " << path << ": " << e.what() << '\n';
    return fs::exists(path) ? kExitDiagnostics : kExitRuntime;
  } catch (const assessment::InsufficientQuestions& e) {
    err << "error: " << path << ": " << e.what() << '\n';
    return kExitDiagnostics;
  }
  for (std::size_t i = 0; i < assessment::kSubjectCount; ++i) {
    const auto s = static_cast<assessment::Subject>(i);
    out << assessment::to_string(s) << ' ' << bank->count(s) << '\n';
  }
  if (seed) {
    for (auto group : {assessment::ScienceGroup::ComputerScience, assessment::ScienceGroup::Biology}) {
      assessment::Background b{1, "demo", 18, 60, "Science", 2009};
      const auto s = assessment::start_session("demo", b, group, *bank, {}, *seed, {});
      out << "draw " << assessment::to_string(group) << ": " << s.ability_questions.size() << " ability, "
          << s.intelligence_questions.size() << " intelligence; first " << s.ability_questions.front() << '\n';
    }
  }
  out << "ok: " << bank->questions().size() << " questions\n";
  return kExitOk;
}

service::HttpServer* g_server = nullptr;

extern "C" void stop_server(int) {
  if (g_server) g_server->stop();
}

int serve(const std::string& config_path, const std::string& listen, const std::string& data_dir,
          std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  service::ServiceConfig config;
  try {
    config = service::load_config(config_path);
    service::apply_env_overrides(config, [](const char* name) { return std::getenv(name); });
    if (!listen.empty()) service::parse_listen(listen, config);
  } catch (const service::ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDiagnostics;
  }
  if (!data_dir.empty()) config.data_dir = data_dir;
  if (seed) config.seed = seed;

  std::unique_ptr<service::AdvisorService> svc;
  try {
    svc = std::make_unique<service::AdvisorService>(config);
  } catch (const kb::KbError& e) {
    print_kb_error(e, err);
    return kExitDiagnostics;
  } catch (const assessment::BankParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDiagnostics;
  } catch (const assessment::InsufficientQuestions& e) {
    err << "error: " << e.what() << '\n';
    return kExitDiagnostics;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  service::HttpServer server(*svc, &out);
  const int port = server.bind(config.host, config.port);
  if (port < 0) {
    err << "error: cannot listen on " << config.host << ':' << config.port << '\n';
    return kExitRuntime;
  }
  err << "listening on " << config.host << ':' << port << " with " << svc->session_count()
      << " resumed session(s)\n";
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  server.listen_after_bind();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Rule-based faculty advisor", "advisor"};
  app.require_subcommand(1);

  auto* engine_cmd = app.add_subcommand("engine", "Rule engine commands");
  engine_cmd->require_subcommand(1);
  auto* engine_run_cmd = engine_cmd->add_subcommand("run", "Reset and run a rule program to quiescence");
  std::string program_file;
  std::string input_dir;
  engine_run_cmd->add_option("file", program_file, "Rule program")->required();
  engine_run_cmd->add_option("--input-dir", input_dir, "Directory for router files (default: current)");

  auto* advise_cmd = app.add_subcommand("advise", "Advise one student from a std-data-in.txt record");
  std::string in_path;
  std::string out_path;
  std::vector<std::string> kb_paths;
  std::string format;
  advise_cmd->add_option("--in", in_path, "Student record")->required();
  advise_cmd->add_option("--out", out_path, "Report file to write");
  advise_cmd->add_option("--kb", kb_paths, "Rule files replacing the shipped knowledge base");
  advise_cmd->add_option("--format", format, "Print the report as raw or json instead of a summary")
      ->check(CLI::IsMember({"raw", "json"}));

  auto* kb_cmd = app.add_subcommand("kb", "Knowledge base commands");
  kb_cmd->require_subcommand(1);
  auto* compile_cmd = kb_cmd->add_subcommand("compile", "Compile faculty criteria into rules");
  std::string criteria_path;
  std::string rules_out;
  compile_cmd->add_option("criteria", criteria_path, "Criteria file")->required();
  compile_cmd->add_option("--out", rules_out, "Rule file to write (default: standard output)");

  auto* bank_cmd = app.add_subcommand("bank", "Question bank commands");
  bank_cmd->require_subcommand(1);
  auto* check_cmd = bank_cmd->add_subcommand("check", "Validate a question bank");
  std::string bank_path;
  std::optional<std::uint64_t> bank_seed;
  check_cmd->add_option("file", bank_path, "Question bank")->required();
  check_cmd->add_option("--seed", bank_seed, "Also show the draw for this seed");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string config_path;
  std::string listen;
  std::string data_dir;
  std::optional<std::uint64_t> serve_seed;
  serve_cmd->add_option("--config", config_path, "Service config (JSON)")->required();
  serve_cmd->add_option("--listen", listen, "host:port, overrides config and environment");
  serve_cmd->add_option("--data-dir", data_dir, "Session storage directory");
  serve_cmd->add_option("--seed", serve_seed, "Fixed question draw seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (engine_run_cmd->parsed()) return engine_run(program_file, input_dir, out, err, in);
  if (advise_cmd->parsed()) return advise(in_path, out_path, kb_paths, format, out, err);
  if (compile_cmd->parsed()) return kb_compile(criteria_path, rules_out, out, err);
  if (check_cmd->parsed()) return bank_check(bank_path, bank_seed, out, err);
  if (serve_cmd->parsed()) return serve(config_path, listen, data_dir, serve_seed, out, err);
  return kExitUsage;
}

}  // namespace advisor::cli
