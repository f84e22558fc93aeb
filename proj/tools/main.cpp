#include "fpgames/cli.hpp"

int main(int argc, char** argv) { return fpgames::run_cli(argc, argv); }
