#include "commands.h"
#include "common.h"

#include <iostream>
#include <stdexcept>

int main(int argc, char** argv) {
  using namespace beat::cli;

  CLI::App app{"Gesture dataset tooling: conversion, annotation, metrics and the cascaded motion network", "beat"};
  app.set_config("--config", "", "INI/TOML file with one section per subcommand")->envname("BEAT_CONFIG");
  app.require_subcommand(1);

  Action action;
  register_convert(app, action);
  register_beats(app, action);
  register_annotate(app, action);
  register_stats(app, action);
  register_eval(app, action);
  register_camn(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    return action ? action() : kOk;
  } catch (const beat::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const beat::DataMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataMismatch;
  } catch (const beat::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
