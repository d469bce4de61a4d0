#include "svev/cli.hpp"

int main(int argc, char** argv) { return svev::cli::run(argc, argv); }
