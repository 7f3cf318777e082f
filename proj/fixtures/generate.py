#!/usr/bin/env python3
"""Regenerates the replay fixtures in fixtures/replay/.

Each fixture is keyed by the same canonical invocation digest the C++ replay
backend computes: sha256(program + "\\0" + "\\0".join(argv)) with the value
after "-o" replaced by "<output>" and the value after "-w" reduced to its
file name.

    python3 fixtures/generate.py
"""

import hashlib
import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
REPLAY = os.path.join(HERE, "replay")
SOURCES = os.path.join(HERE, "sources")

HOST = "armageddon.htb"
ADDR = "10.10.10.233"


def canonical_key(program, argv):
    parts = [program]
    for i, arg in enumerate(argv):
        prev = argv[i - 1] if i > 0 else None
        if prev == "-o":
            parts.append("<output>")
        elif prev == "-w":
            parts.append(os.path.basename(arg))
        else:
            parts.append(arg)
    return hashlib.sha256("\0".join(parts).encode()).hexdigest()


def nmap_argv(banner, scripts, online, host=HOST):
    argv = []
    if banner:
        argv.append("-sV")
    if scripts:
        argv.append("-sC")
    if not online:
        argv.append("-Pn")
    return argv + ["-oX", "-", host]


def nmap_xml(banner, scripts, online):
    args = " ".join(["nmap"] + nmap_argv(banner, scripts, online))
    if banner:
        ssh = ('<service name="ssh" product="OpenSSH" version="7.4" extrainfo="protocol 2.0" '
               'method="probed" conf="10"><cpe>cpe:/a:openbsd:openssh:7.4</cpe></service>')
        http = ('<service name="http" product="Apache httpd" version="2.4.6" '
                'extrainfo="(CentOS) PHP/5.4.16" method="probed" conf="10">'
                '<cpe>cpe:/a:apache:http_server:2.4.6</cpe></service>')
    else:
        ssh = '<service name="ssh" method="table" conf="3"/>'
        http = '<service name="http" method="table" conf="3"/>'
    ssh_scripts = http_scripts = ""
    if scripts:
        ssh_scripts = (
            '<script id="ssh-hostkey" output="&#xa;  2048 82:c6:bb:c7:02:6a:93:bb:7c:cb:dd:9c:30:93:79:34 (RSA)'
            '&#xa;  256 3a:ca:95:30:f3:12:d7:ca:45:05:bc:c7:f1:16:bb:fc (ECDSA)'
            '&#xa;  256 7a:d4:b3:68:79:cf:62:8a:7d:5a:61:e7:06:0f:5f:33 (ED25519)"/>')
        http_scripts = (
            '<script id="http-generator" output="Drupal 7 (http://drupal.org)"/>'
            '<script id="http-robots.txt" output="36 disallowed entries (15 shown)&#xa;/includes/ /misc/ '
            '/modules/ /profiles/ /scripts/ &#xa;/themes/ /CHANGELOG.txt /cron.php /INSTALL.mysql.txt"/>'
            '<script id="http-server-header" output="Apache/2.4.6 (CentOS) PHP/5.4.16">'
            '<elem>Apache/2.4.6 (CentOS) PHP/5.4.16</elem></script>'
            '<script id="http-title" output="Welcome to  Armageddon |  Armageddon">'
            '<elem key="title">Welcome to  Armageddon |  Armageddon</elem></script>')
    return f"""<?xml version="1.0" encoding="UTF-8"?>
<!DOCTYPE nmaprun>
<?xml-stylesheet href="file:///usr/bin/../share/nmap/nmap.xsl" type="text/xsl"?>
<!-- Nmap 7.92 scan initiated Sat Jul 24 14:02:11 2021 as: {args} -->
<nmaprun scanner="nmap" args="{args}" start="1627135331" startstr="Sat Jul 24 14:02:11 2021" version="7.92" xmloutputversion="1.05">
<scaninfo type="syn" protocol="tcp" numservices="1000" services="1,3-4,6-7,9,13,17,19-26"/>
<verbose level="0"/>
<debugging level="0"/>
<hosthint><status state="up" reason="unknown-response" reason_ttl="0"/>
<address addr="{ADDR}" addrtype="ipv4"/>
<hostnames>
<hostname name="{HOST}" type="user"/>
</hostnames>
</hosthint>
<host starttime="1627135331" endtime="1627135345"><status state="up" reason="{'user-set' if not online else 'echo-reply'}" reason_ttl="{0 if not online else 63}"/>
<address addr="{ADDR}" addrtype="ipv4"/>
<hostnames>
<hostname name="{HOST}" type="user"/>
</hostnames>
<ports><extraports state="closed" count="998">
<extrareasons reason="reset" count="998" proto="tcp" ports="1,3-4,6-7,9,13,17,19-21,23-26"/>
</extraports>
<port protocol="tcp" portid="22"><state state="open" reason="syn-ack" reason_ttl="63"/>{ssh}{ssh_scripts}</port>
<port protocol="tcp" portid="80"><state state="open" reason="syn-ack" reason_ttl="63"/>{http}{http_scripts}</port>
</ports>
<times srtt="41520" rttvar="2067" to="100000"/>
</host>
<runstats><finished time="1627135345" timestr="Sat Jul 24 14:02:25 2021" summary="Nmap done at Sat Jul 24 14:02:25 2021; 1 IP address (1 host up) scanned in 14.21 seconds" elapsed="14.21" exit="success"/><hosts up="1" down="0" total="1"/>
</runstats>
</nmaprun>
"""


def write_fixture(program, argv, payload, duration_ms):
    key = canonical_key(program, argv)
    with open(os.path.join(REPLAY, key + ".out"), "w", encoding="utf-8") as f:
        f.write(payload)
    with open(os.path.join(REPLAY, key + ".meta"), "w", encoding="utf-8") as f:
        json.dump({"exit_code": 0, "duration_ms": duration_ms}, f, indent=2)
        f.write("\n")
    return key


def ffuf_argv(base, anchor, recursion, follow, ignore, wordlist):
    argv = ["-u", base + anchor + "FUZZ", "-w", wordlist, "-of", "json", "-o", "results.json"]
    if follow:
        argv.append("-r")
    if recursion:
        argv.append("-recursion")
    if ignore:
        argv += ["-fc", ignore]
    return argv


def split_fuzz_url(url):
    scheme_end = url.index("://") + 3
    slash = url.index("/", scheme_end)
    return url[:slash], url[slash:-len("FUZZ")]


def main():
    os.makedirs(REPLAY, exist_ok=True)
    for name in os.listdir(REPLAY):
        if name.endswith((".out", ".meta")):
            os.remove(os.path.join(REPLAY, name))

    manifest = []
    for banner in (False, True):
        for scripts in (False, True):
            for online in (False, True):
                argv = nmap_argv(banner, scripts, online)
                key = write_fixture("nmap", argv, nmap_xml(banner, scripts, online), 14210)
                manifest.append({"key": key, "program": "nmap", "argv": argv})

    for source in sorted(os.listdir(SOURCES)):
        if not source.endswith(".ffuf.json"):
            continue
        with open(os.path.join(SOURCES, source), encoding="utf-8") as f:
            payload = f.read()
        doc = json.loads(payload)
        cfg = doc["config"]
        base, anchor = split_fuzz_url(cfg["url"])
        ignore = cfg.get("filters", {}).get("status", {}).get("value", "")
        argv = ffuf_argv(base, anchor, cfg["recursion"], cfg["follow_redirects"], ignore, cfg["wordlists"][0])
        key = write_fixture("ffuf", argv, payload, int(doc.get("duration_ms", 9000)))
        manifest.append({"key": key, "program": "ffuf", "argv": argv, "source": source})

    with open(os.path.join(REPLAY, "MANIFEST.json"), "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")
    print(f"wrote {len(manifest)} fixtures to {REPLAY}", file=sys.stderr)


if __name__ == "__main__":
    main()
