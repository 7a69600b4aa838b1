#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "catalyst/document.hpp"
#include "catalyst/error.hpp"
#include "catalyst/export.hpp"
#include "catalyst/service.hpp"
#include "catalyst/snapshot.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw catalyst::Error(catalyst::ErrorCode::UnreadableFile, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int serve(const std::string& bind_override, const std::string& data_dir_override) {
  auto config = catalyst::ServiceConfig::from_env();
  if (!bind_override.empty()) std::tie(config.host, config.port) = catalyst::parse_bind_address(bind_override);
  if (!data_dir_override.empty()) config.data_dir = data_dir_override;

  // Signals are taken synchronously by a dedicated thread; every other
  // thread inherits the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  catalyst::Service service(config);
  int port = service.bind();
  std::cerr << "restored " << service.restored_sessions() << " session(s) from " << config.data_dir.string() << "\n";
  std::cout << "listening on http://" << config.host << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  service.run();
  // run() also returns if the listener dies on its own; wake the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  std::cerr << "snapshots flushed, exiting\n";
  return 0;
}

int extract(const std::string& path) {
  auto doc = catalyst::make_document(std::filesystem::path(path).filename().string(), read_file(path));
  std::cout << catalyst::extract_text(doc) << "\n";
  return 0;
}

int export_snapshot(const std::string& snapshot, const std::string& format, const std::string& output,
                    const std::string& title, bool include_summary, const std::string& page_size) {
  catalyst::SessionState state = catalyst::decode_snapshot(read_file(snapshot));
  catalyst::ExportOptions options;
  options.title = title;
  options.include_summary = include_summary;
  auto doc = catalyst::build_preview(state, options, state.updated_at);
  std::string bytes;
  if (format == "txt") {
    bytes = catalyst::render_plaintext(doc);
  } else {
    bytes = catalyst::render_pdf(doc, {catalyst::parse_page_size(page_size)});
  }
  if (output.empty() || output == "-") {
    std::cout << bytes;
  } else {
    std::ofstream out(output, std::ios::binary);
    out << bytes;
    if (!out) throw catalyst::Error(catalyst::ErrorCode::RenderFailure, "cannot write " + output);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaffolding-question workbench: HTTP service and offline utilities"};
  app.set_version_flag("--version", std::string(catalyst::version()));
  app.require_subcommand(1);

  std::string bind;
  std::string data_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API (configured by CC_* environment variables)");
  serve_cmd->add_option("--bind", bind, "host:port, overrides CC_BIND");
  serve_cmd->add_option("--data-dir", data_dir, "Snapshot directory, overrides CC_DATA_DIR");

  std::string input;
  auto* extract_cmd = app.add_subcommand("extract", "Print the normalized text of a .pdf or .docx file");
  extract_cmd->add_option("file", input, "Document to read")->required()->check(CLI::ExistingFile);

  std::string snapshot;
  std::string format = "txt";
  std::string output;
  std::string title = "Scaffolding Questions";
  bool no_summary = false;
  std::string page_size = "a4";
  auto* export_cmd = app.add_subcommand("export", "Render the question bank of a session snapshot");
  export_cmd->add_option("--snapshot", snapshot, "Snapshot JSON file")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--format", format, "txt or pdf")->check(CLI::IsMember({"txt", "pdf"}));
  export_cmd->add_option("-o,--output", output, "Output file (stdout when omitted)");
  export_cmd->add_option("--title", title, "Handout title; empty to omit");
  export_cmd->add_flag("--no-summary", no_summary, "Leave the summary out");
  export_cmd->add_option("--page-size", page_size, "a4 or letter")->check(CLI::IsMember({"a4", "letter"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(bind, data_dir);
    if (*extract_cmd) return extract(input);
    if (*export_cmd) return export_snapshot(snapshot, format, output, title, !no_summary, page_size);
  } catch (const catalyst::Error& e) {
    std::cerr << "error: " << catalyst::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
