#include <aplift/cli.hpp>

int main(int argc, char** argv) { return aplift::cli::run_command(argc, argv); }
