#include "oseentp/cli.hpp"

int main(int argc, char** argv) { return oseentp::run_cli(argc, argv); }
