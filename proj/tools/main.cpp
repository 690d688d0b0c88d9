#include "lspde/cli.hpp"

int main(int argc, char** argv) { return lspde::cli::run(argc, argv); }
