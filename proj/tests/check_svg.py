import sys
import xml.etree.ElementTree as ET

NS = "{http://www.w3.org/2000/svg}"
for path in sys.argv[1:]:
    root = ET.parse(path).getroot()
    assert root.tag == NS + "svg", path
    float(root.get("width")), float(root.get("height"))
    for el in root.iter():
        pts = el.get("points")
        if pts:
            for pair in pts.split():
                x, y = pair.split(",")
                float(x), float(y)
    print("ok", path)
