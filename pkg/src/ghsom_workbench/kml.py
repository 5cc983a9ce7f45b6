"""KML 2.2 export of geotagged tourist records."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .records import TouristRecord

KML_NS = "http://www.opengis.net/kml/2.2"


def export_kml(records: list[TouristRecord]) -> str:
    """Render one Placemark per record (name, comment as description, lon,lat,alt point)."""
    ET.register_namespace("", KML_NS)
    kml = ET.Element(f"{{{KML_NS}}}kml")
    document = ET.SubElement(kml, f"{{{KML_NS}}}Document")
    for r in records:
        placemark = ET.SubElement(document, f"{{{KML_NS}}}Placemark")
        ET.SubElement(placemark, f"{{{KML_NS}}}name").text = r.name
        ET.SubElement(placemark, f"{{{KML_NS}}}description").text = r.comment
        point = ET.SubElement(placemark, f"{{{KML_NS}}}Point")
        coords = ET.SubElement(point, f"{{{KML_NS}}}coordinates")
        coords.text = f"{r.lon!r},{r.lat!r},{r.alt!r}"
    body = ET.tostring(kml, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"
