#include "cli_app.hpp"

int main(int argc, char** argv) { return cflab::cli::run_cli(argc, argv); }
