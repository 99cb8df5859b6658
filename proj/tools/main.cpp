#include "cli.hpp"

int main(int argc, char** argv) { return ctqw_cli::run(argc, argv); }
