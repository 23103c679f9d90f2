#!/usr/bin/env python3
# Copyright (C) 2026 The trackscan Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the binary test fixtures in this directory.

APKs are written with Python's zipfile module and re-read with it to
confirm the entry listings. DEX files are laid out directly from the
published format (header, string_ids, string_data) independently of the
C++ code under test.
"""

import json
import os
import struct
import zipfile
import zlib

HERE = os.path.dirname(os.path.abspath(__file__))


def uleb128(n):
    out = bytearray()
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def mutf8(s):
    out = bytearray()
    for unit in struct.unpack("<%dH" % (len(s.encode("utf-16-le")) // 2), s.encode("utf-16-le")):
        if unit != 0 and unit < 0x80:
            out.append(unit)
        elif unit < 0x800:
            out += bytes([0xC0 | (unit >> 6), 0x80 | (unit & 0x3F)])
        else:
            out += bytes([0xE0 | (unit >> 12), 0x80 | ((unit >> 6) & 0x3F), 0x80 | (unit & 0x3F)])
    return bytes(out)


def build_dex(strings, version=b"035"):
    """Header (0x70 bytes), string_ids, then string_data items."""
    header_size = 0x70
    ids_off = header_size
    data_off = ids_off + 4 * len(strings)
    data = bytearray()
    offsets = []  # (string_data_item offset, first MUTF-8 byte offset)
    for s in strings:
        item_off = data_off + len(data)
        data += uleb128(len(s.encode("utf-16-le")) // 2)
        offsets.append((item_off, data_off + len(data)))
        data += mutf8(s) + b"\x00"
    file_size = data_off + len(data)
    body = bytearray(file_size)
    body[0:8] = b"dex\n" + version + b"\x00"
    struct.pack_into("<I", body, 32, file_size)
    struct.pack_into("<I", body, 36, header_size)
    struct.pack_into("<I", body, 40, 0x12345678)
    struct.pack_into("<I", body, 56, len(strings))
    struct.pack_into("<I", body, 60, ids_off if strings else 0)
    for i, (item_off, _) in enumerate(offsets):
        struct.pack_into("<I", body, ids_off + 4 * i, item_off)
    body[data_off:] = data
    struct.pack_into("<I", body, 8, zlib.adler32(bytes(body[12:])) & 0xFFFFFFFF)
    return bytes(body), [o for _, o in offsets]


MINIMAL_STRINGS = [
    "<init>",
    "Landroid/app/Activity;",
    "https://ads.doubleclick.net/mads/gma",
    "http://data.flurry.com/aap.do",
    "hello world",
    "admobi.us",
]
POOL_STRINGS = ["https://ads.example.com/v1", "hello"]
# Ten strings, three of which contain a hostname (given as the second item).
POOL10 = [
    ("<init>", None),
    ("Landroid/app/Activity;", None),
    ("https://ads.tracker-one.com/v2/collect?id=", "ads.tracker-one.com"),
    ("V", None),
    ("onCreate", None),
    ("api.analytics.io", "api.analytics.io"),
    ("Ljava/lang/String;", None),
    ("hello world", None),
    ("mailto:support@example.org", "example.org"),
    ("version 1.2.3", None),
]
SECOND_DEX_STRINGS = ["Lcom/example/Second;", "graph.facebook.com"]


def write_zip(path, entries):
    with zipfile.ZipFile(path, "w") as z:
        for name, data, method in entries:
            info = zipfile.ZipInfo(name, date_time=(2018, 1, 1, 0, 0, 0))
            info.compress_type = method
            z.writestr(info, data)
    with zipfile.ZipFile(path) as z:
        return [i.filename for i in z.infolist()]


def write_truncated(path, name, data):
    """Local header + deflate stream cut in half + central directory."""
    comp = zlib.compressobj(9, zlib.DEFLATED, -15)
    stream = comp.compress(data) + comp.flush()
    cut = stream[: len(stream) // 2]
    crc = zlib.crc32(data) & 0xFFFFFFFF
    fname = name.encode()
    local = struct.pack("<IHHHHHIIIHH", 0x04034B50, 20, 0, 8, 0, 0x21, crc, len(cut), len(data), len(fname), 0)
    central = struct.pack("<IHHHHHHIIIHHHHHII", 0x02014B50, 20, 20, 0, 8, 0, 0x21, crc, len(cut), len(data),
                          len(fname), 0, 0, 0, 0, 0, 0)
    body = local + fname + cut
    cd = central + fname
    eocd = struct.pack("<IHHHHIIH", 0x06054B50, 0, 0, 1, 1, len(cd), len(body), 0)
    with open(path, "wb") as f:
        f.write(body + cd + eocd)


def main():
    minimal_dex, minimal_offsets = build_dex(MINIMAL_STRINGS)
    pool_dex, pool_offsets = build_dex(POOL_STRINGS)
    second_dex, _ = build_dex(SECOND_DEX_STRINGS)
    empty_dex, _ = build_dex([])
    pool10_dex, pool10_offsets = build_dex([text for text, _ in POOL10])
    pool10_hosts = [[off + text.index(host), host] for (text, host), off in zip(POOL10, pool10_offsets) if host]

    for name, blob in [("minimal.dex", minimal_dex), ("pool2.dex", pool_dex), ("empty_pool.dex", empty_dex),
                       ("pool10.dex", pool10_dex)]:
        with open(os.path.join(HERE, name), "wb") as f:
            f.write(blob)

    listings = {
        "minimal.apk": write_zip(os.path.join(HERE, "minimal.apk"),
                                 [("classes.dex", minimal_dex, zipfile.ZIP_DEFLATED)]),
        "multidex.apk": write_zip(os.path.join(HERE, "multidex.apk"), [
            ("classes2.dex", second_dex, zipfile.ZIP_DEFLATED),
            ("res/raw/notes.txt", b"not bytecode: ads.example.com", zipfile.ZIP_STORED),
            ("classes.dex", minimal_dex, zipfile.ZIP_STORED),
            ("AndroidManifest.xml", b"\x03\x00\x08\x00binary-axml-placeholder", zipfile.ZIP_DEFLATED),
        ]),
        "nodex.apk": write_zip(os.path.join(HERE, "nodex.apk"),
                               [("res/values/strings.xml", b"<resources/>", zipfile.ZIP_DEFLATED)]),
        "empty.apk": write_zip(os.path.join(HERE, "empty.apk"), []),
    }
    write_truncated(os.path.join(HERE, "truncated_dex.apk"), "classes.dex", minimal_dex)
    with open(os.path.join(HERE, "not_a_zip.apk"), "w") as f:
        f.write("This is a plain text file renamed to .apk.\n")

    expected = {
        "listings": listings,
        "minimal_dex_size": len(minimal_dex),
        "minimal_string_offsets": minimal_offsets,
        "pool2_string_offsets": pool_offsets,
        "pool10_hosts": pool10_hosts,
    }
    with open(os.path.join(HERE, "fixtures.json"), "w") as f:
        json.dump(expected, f, indent=2, sort_keys=True)
        f.write("\n")
    print(json.dumps(expected, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
