#include "csturm/cli.hpp"

int main(int argc, char** argv) { return csturm::cli::run(argc, argv); }
