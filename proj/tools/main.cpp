#include "cli.hpp"

int main(int argc, char** argv) { return gluewalk::cli::run(argc, argv); }
