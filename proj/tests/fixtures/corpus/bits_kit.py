# Bit twiddling with slow-but-obvious reference checks.


def popcount(num):
    count = 0
    rest = num
    while rest:
        rest &= rest - 1
        count += 1
    return count


def popcount_slow(num):
    return bin(num).count("1")


def lowest_set(num):
    return num & -num


def is_power_of_two(num):
    return num > 0 and num & (num - 1) == 0


def next_power_of_two(num):
    if num <= 1:
        return 1
    out = 1
    while out < num:
        out <<= 1
    return out


def reverse_bits(num, width):
    out = 0
    for pos in range(width):
        if num & (1 << pos):
            out |= 1 << (width - 1 - pos)
    return out


def rotate_left(num, shift, width):
    mask = (1 << width) - 1
    shift %= width
    return ((num << shift) | (num >> (width - shift))) & mask


def gray_encode(num):
    return num ^ (num >> 1)


def gray_decode(code):
    out = 0
    rest = code
    while rest:
        out ^= rest
        rest >>= 1
    return out


def set_bit(num, pos):
    return num | (1 << pos)


def clear_bit(num, pos):
    return num & ~(1 << pos)


def toggle_bit(num, pos):
    return num ^ (1 << pos)


def bit_slice(num, low, width):
    return (num >> low) & ((1 << width) - 1)


def swap_nibbles(byte):
    return ((byte & 0x0F) << 4) | ((byte >> 4) & 0x0F)


def parity(num):
    return popcount(num) & 1


def single_odd_one(items):
    acc = 0
    for item in items:
        acc ^= item
    return acc


def count_bit_flips(before, after):
    return popcount(before ^ after)


def mask_of(width):
    return (1 << width) - 1


def subsets_of_mask(mask):
    subs = []
    sub = mask
    while True:
        subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return subs


for num in range(300):
    assert popcount(num) == popcount_slow(num)
    assert gray_decode(gray_encode(num)) == num

assert lowest_set(12) == 4
assert lowest_set(5) == 1
assert is_power_of_two(64)
assert not is_power_of_two(0)
assert not is_power_of_two(12)

assert next_power_of_two(1) == 1
assert next_power_of_two(17) == 32
assert next_power_of_two(64) == 64

assert reverse_bits(0b0001, 4) == 0b1000
assert reverse_bits(0b1011, 4) == 0b1101
for num in range(64):
    assert reverse_bits(reverse_bits(num, 8), 8) == num

assert rotate_left(0b0001, 1, 4) == 0b0010
assert rotate_left(0b1000, 1, 4) == 0b0001
for num in range(16):
    assert rotate_left(num, 4, 4) == num

# adjacent gray codes differ in exactly one bit
for num in range(255):
    assert popcount(gray_encode(num) ^ gray_encode(num + 1)) == 1

assert set_bit(0, 3) == 8
assert clear_bit(15, 0) == 14
assert toggle_bit(toggle_bit(9, 2), 2) == 9
assert bit_slice(0b110110, 1, 3) == 0b011
assert swap_nibbles(0xAB) == 0xBA
assert parity(0b111) == 1
assert parity(0b1111) == 0

assert single_odd_one([4, 7, 4, 9, 9]) == 7
assert count_bit_flips(0b1010, 0b0110) == 2
assert mask_of(5) == 31

subs = subsets_of_mask(0b101)
assert sorted(subs) == [0b000, 0b001, 0b100, 0b101]
assert len(subsets_of_mask(0b111)) == 8

print("bits_kit", popcount(12345), gray_encode(100), mask_of(10))
