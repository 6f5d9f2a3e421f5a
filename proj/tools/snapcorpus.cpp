#include <iostream>

#include "snapcorpus/pipeline/cli.hpp"

int main(int argc, char** argv)
{
    return snapcorpus::pipeline::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
