#include <cstdio>

int main() {
    std::puts("blockcg cli placeholder");
    return 0;
}
